//! Real root isolation by Descartes' rule with bisection, exact throughout.
//! A floating-point Aberth iteration gives complex roots for measurements.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{factor, IntPoly};
use crate::dyadic::DyadicInterval;

/// An isolating interval: it contains exactly one real root of `poly`, and
/// its endpoints are not roots unless the interval is a single point.
#[derive(Debug, Clone)]
pub struct RootBox {
    pub interval: DyadicInterval,
    pub multiplicity: u32,
    /// Irreducible factor vanishing at the root.
    pub poly: IntPoly,
}

impl RootBox {
    pub fn is_exact(&self) -> bool {
        self.interval.is_point()
    }

    pub fn approx(&self) -> f64 {
        self.interval.mid_f64()
    }

    /// Bisect until the width is at most `2^-bits`.
    pub fn refine(&self, bits: u32) -> RootBox {
        let mut iv = self.interval.clone();
        if iv.is_point() || iv.width_within(bits) {
            return self.clone();
        }
        let s_lo = self.poly.sign_at_dyadic(iv.lo(), iv.scale());
        while !iv.width_within(bits) {
            let s = iv.scale() + 1;
            let m = iv.lo() + iv.hi();
            match self.poly.sign_at_dyadic(&m, s) {
                Ordering::Equal => {
                    iv = DyadicInterval::point(m, s);
                    break;
                }
                sm if sm == s_lo => iv = DyadicInterval::new(m, iv.hi() << 1u32, s),
                _ => iv = DyadicInterval::new(iv.lo() << 1u32, m, s),
            }
        }
        RootBox {
            interval: iv,
            multiplicity: self.multiplicity,
            poly: self.poly.clone(),
        }
    }
}

fn variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for x in c {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn taylor_shift_one(c: &[BigInt]) -> Vec<BigInt> {
    let mut c = c.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = c[j + 1].clone();
            c[j] += add;
        }
    }
    c
}

/// Upper bound on the number of roots in (0, 1).
fn descartes_bound(c: &[BigInt]) -> usize {
    let mut r = c.to_vec();
    r.reverse();
    variations(&taylor_shift_one(&r))
}

struct Isolator {
    e: u32,
    negative: bool,
    out: Vec<DyadicInterval>,
}

impl Isolator {
    fn place(&self, lo: BigInt, hi: BigInt, k: u32) -> DyadicInterval {
        let (lo, hi) = (lo << self.e, hi << self.e);
        if self.negative {
            DyadicInterval::new(-hi, -lo, k)
        } else {
            DyadicInterval::new(lo, hi, k)
        }
    }

    fn run(&mut self, p: Vec<BigInt>, c: BigInt, k: u32, left_root: bool, right_root: bool) {
        let v = descartes_bound(&p);
        if v == 0 {
            return;
        }
        if v == 1 && !left_root && !right_root {
            let iv = self.place(c.clone(), c + 1, k);
            self.out.push(iv);
            return;
        }
        let d = p.len() - 1;
        let left: Vec<BigInt> = p
            .iter()
            .enumerate()
            .map(|(i, a)| a << (d - i))
            .collect();
        let right = taylor_shift_one(&left);
        let mid_root = right[0].is_zero();
        if mid_root {
            let m: BigInt = &c * 2 + 1;
            let iv = self.place(m.clone(), m, k + 1);
            self.out.push(iv);
        }
        self.run(left, &c * 2, k + 1, left_root, mid_root);
        self.run(right, &c * 2 + 1, k + 1, mid_root, right_root);
    }
}

/// Isolating intervals for the real roots of a squarefree polynomial.
fn isolate_squarefree(s: &IntPoly) -> Vec<DyadicInterval> {
    let d = s.deg();
    if d == 0 {
        return Vec::new();
    }
    let lc = s.leading().unwrap().abs();
    let m = s.coeffs().iter().map(|c| c.abs()).max().unwrap();
    let mut e = 0u32;
    while (&lc << e) <= &lc + &m {
        e += 1;
    }
    let mut out = Vec::new();
    let zero_root = s.coeff(0).is_zero();
    if zero_root {
        out.push(DyadicInterval::point(BigInt::zero(), 0));
    }
    for negative in [false, true] {
        // S(±2^e x)
        let p: Vec<BigInt> = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let v = a << (e * i as u32);
                if negative && i % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let mut iso = Isolator {
            e,
            negative,
            out: Vec::new(),
        };
        iso.run(p, BigInt::zero(), 0, zero_root, false);
        out.extend(iso.out);
    }
    out
}

/// Real roots of a squarefree polynomial, sorted, multiplicity one.
pub fn real_roots_squarefree(q: &IntPoly) -> Vec<RootBox> {
    let mut out: Vec<RootBox> = isolate_squarefree(q)
        .into_iter()
        .map(|iv| RootBox {
            interval: iv,
            multiplicity: 1,
            poly: q.clone(),
        }
        .refine(64))
        .collect();
    out.sort_by(|a, b| a.interval.lo_ratio().cmp(&b.interval.lo_ratio()));
    out
}

/// All distinct real roots with multiplicities, in increasing order, with
/// pairwise disjoint boxes.
pub fn real_roots(p: &IntPoly) -> Vec<RootBox> {
    if p.deg() == 0 {
        return Vec::new();
    }
    let f = factor(p);
    let mut boxes = Vec::new();
    for (q, m) in &f.factors {
        for iv in isolate_squarefree(q) {
            boxes.push(RootBox {
                interval: iv,
                multiplicity: *m,
                poly: q.clone(),
            });
        }
    }
    let mut boxes: Vec<RootBox> = boxes.into_iter().map(|b| b.refine(64)).collect();
    let mut bits = 72;
    loop {
        boxes.sort_by(|a, b| {
            a.approx()
                .partial_cmp(&b.approx())
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.interval.lo_ratio().cmp(&b.interval.lo_ratio()))
        });
        let clash: Vec<usize> = (1..boxes.len())
            .filter(|&i| !boxes[i - 1].interval.certainly_lt(&boxes[i].interval))
            .collect();
        if clash.is_empty() {
            return boxes;
        }
        for i in clash {
            boxes[i - 1] = boxes[i - 1].refine(bits);
            boxes[i] = boxes[i].refine(bits);
        }
        bits *= 2;
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let n = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / n, (self.1 * o.0 - self.0 * o.1) / n)
    }
    fn abs(self) -> f64 {
        libm::hypot(self.0, self.1)
    }
}

/// All complex roots (as `(re, im)`) of a polynomial with `f64` coefficients,
/// constant term first, by Aberth–Ehrlich iteration.
pub fn complex_roots_f64(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lc = c[d];
    let a: Vec<f64> = c.iter().map(|x| x / lc).collect();
    let radius = 1.0 + a[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let r0 = radius.min(libm::pow(a[0].abs().max(1e-300), 1.0 / d as f64).max(0.5));
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * k as f64 / d as f64 + 0.4;
            C(r0 * libm::cos(t), r0 * libm::sin(t))
        })
        .collect();
    let eval = |x: C| -> (C, C) {
        let mut p = C(1.0, 0.0);
        let mut dp = C(0.0, 0.0);
        for i in (0..d).rev() {
            dp = dp.mul(x).add(p);
            p = p.mul(x).add(C(a[i], 0.0));
        }
        (p, dp)
    };
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval(z[k]);
            if p.abs() == 0.0 {
                continue;
            }
            let ratio = p.div(dp);
            let mut s = C(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    s = s.add(C(1.0, 0.0).div(z[k].sub(z[j])));
                }
            }
            let w = ratio.div(C(1.0, 0.0).sub(ratio.mul(s)));
            if w.0.is_finite() && w.1.is_finite() {
                z[k] = z[k].sub(w);
                moved = moved.max(w.abs() / (1.0 + z[k].abs()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    let mut out: Vec<(f64, f64)> = z.into_iter().map(|c| (c.0, c.1)).collect();
    out.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap_or(Ordering::Equal)
            .then(x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal))
    });
    out
}

/// Distance from `x` to the nearest complex root, from the `f64` roots.
pub fn nearest_root_distance_f64(p: &IntPoly, x: f64) -> Option<f64> {
    let c: Vec<f64> = p.coeffs().iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    complex_roots_f64(&c)
        .into_iter()
        .map(|(re, im)| libm::hypot(re - x, im))
        .reduce(f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn sqrt_two_and_exact_roots() {
        let r = real_roots(&p(&[-2, 0, 1]));
        assert_eq!(r.len(), 2);
        let r1 = r[1].refine(60);
        assert!((r1.approx() - core::f64::consts::SQRT_2).abs() < 1e-15);
        let r = real_roots(&p(&[0, -1, 0, 4]));
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|b| b.is_exact()));
        assert_eq!(r[0].approx(), -0.5);
        assert_eq!(r[1].approx(), 0.0);
        assert_eq!(r[2].approx(), 0.5);
    }

    #[test]
    fn multiplicities_and_no_roots() {
        let q = p(&[1, 1]).pow(2).mul(&p(&[-3, 1]));
        let r = real_roots(&q);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].multiplicity, 2);
        assert_eq!(r[1].multiplicity, 1);
        assert!(real_roots(&p(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn close_roots_are_separated() {
        // (1000x - 1)(1001x - 1)(x^2 - 2)
        let q = p(&[-1, 1000]).mul(&p(&[-1, 1001])).mul(&p(&[-2, 0, 1]));
        let r = real_roots(&q);
        assert_eq!(r.len(), 4);
        for w in r.windows(2) {
            assert!(w[0].interval.certainly_lt(&w[1].interval));
        }
    }

    #[test]
    fn aberth_finds_unit_roots() {
        let z = complex_roots_f64(&[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(z.len(), 3);
        for (re, im) in z {
            assert!((libm::hypot(re, im) - 1.0).abs() < 1e-12);
        }
        let d = nearest_root_distance_f64(&p(&[-2, 0, 1]), 1.0).unwrap();
        assert!((d - (core::f64::consts::SQRT_2 - 1.0)).abs() < 1e-14);
    }
}

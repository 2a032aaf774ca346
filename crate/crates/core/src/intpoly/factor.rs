//! Squarefree decomposition and complete factorization over the integers
//! (Zassenhaus: factor modulo a small prime, Hensel lift, recombine).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::{trim, Field, Fp};
use super::IntPoly;
use crate::error::{Error, Result};

/// `P = sign * content * prod factors[i].0 ^ factors[i].1`, every factor
/// primitive, irreducible, with positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(&self.content * BigInt::from(self.sign));
        for (q, m) in &self.factors {
            acc = acc.mul(&q.pow(*m));
        }
        acc
    }

    /// Product of the distinct irreducible factors.
    pub fn radical(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::constant(BigInt::one()), |a, (q, _)| a.mul(q))
    }
}

fn canonical_order(a: &IntPoly, b: &IntPoly) -> core::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().cmp(b.coeffs()))
}

/// `P = prod S_i^i` with each `S_i` squarefree, primitive and pairwise coprime
/// (Yun). Returns `(S_i, i)` for the non-constant `S_i`. `P` must be non-zero.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, u32)> {
    let f = p.primitive_part();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fd = f.derivative();
    let a0 = IntPoly::gcd(&f, &fd);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let mut c = fd.div_exact(&a0).expect("gcd divides derivative");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.deg() > 0 {
        let a = IntPoly::gcd(&b, &d);
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("yun step");
        c = d.div_exact(&a).expect("yun step");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

fn reduce(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn to_big(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn reduce_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

/// Lift `f = g0 h0 (mod p)` to `f = g h (mod p^steps)`; `f` monic modulo
/// `p^steps`, `g0`, `h0` monic and coprime.
fn hensel_pair(
    f: &[BigInt],
    g0: &Fp,
    h0: &Fp,
    k: &Field,
    steps: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, s, t) = k.ext_gcd(g0, h0);
    let p = BigInt::from(k.p);
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut pj = p.clone();
    for _ in 1..steps {
        let gh = int_mul(&g, &h);
        let n = f.len().max(gh.len());
        let e: Fp = trim(
            (0..n)
                .map(|i| {
                    let d = f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default();
                    debug_assert!((&d % &pj).is_zero());
                    (d / &pj).mod_floor(&p).to_u64().unwrap()
                })
                .collect(),
        );
        let a = k.rem(&k.poly_mul(&t, &e), g0);
        let b = k.rem(&k.poly_mul(&s, &e), h0);
        for (i, c) in a.iter().enumerate() {
            g[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in b.iter().enumerate() {
            h[i] += &pj * BigInt::from(*c);
        }
        pj *= &p;
    }
    (g, h)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let s = idx.len();
    for i in (0..s).rev() {
        if idx[i] < n - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Irreducible factors of a primitive squarefree polynomial with positive
/// leading coefficient.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let d = f.deg();
    if d <= 1 {
        return vec![f.clone()];
    }
    let lc = f.leading().unwrap().clone();
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let k = Field { p };
        let fp = reduce(f, p);
        if !k.is_squarefree(&fp) {
            continue;
        }
        let fs = k.factor_squarefree(&k.monic(&fp), p);
        if fs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 4 {
            break;
        }
    }
    let (p, modular) = best.expect("a squarefree reduction exists for small primes");
    let k = Field { p };
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let mignotte = binomial(d, d / 2) * (norm2.sqrt() + 1u32);
    let bound = BigInt::from(2u32) * lc.abs() * mignotte;
    let pb = BigInt::from(p);
    let mut steps = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        steps += 1;
    }
    let monic_f = {
        let inv = mod_inverse(&lc, &pk);
        reduce_mod(&f.scale(&inv).coeffs().to_vec(), &pk)
    };
    let mut lifted = Vec::with_capacity(modular.len());
    let mut target = monic_f;
    for i in 0..modular.len() - 1 {
        let rest = modular[i + 1..]
            .iter()
            .fold(vec![1u64], |a, b| k.poly_mul(&a, b));
        let (g, h) = hensel_pair(&target, &modular[i], &rest, &k, steps);
        lifted.push(reduce_mod(&g, &pk));
        target = reduce_mod(&h, &pk);
    }
    lifted.push(target);

    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut pool = lifted;
    let mut s = 1;
    'outer: while 2 * s <= pool.len() {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lcr = rest.leading().unwrap().clone();
            let mut g = vec![lcr.clone()];
            for &i in &idx {
                g = reduce_mod(&int_mul(&g, &pool[i]), &pk);
            }
            let cand = symmetric(&g, &pk).primitive_part();
            if cand.deg() > 0 {
                if let Some(q) = rest.div_exact(&cand) {
                    out.push(cand);
                    rest = q.primitive_part();
                    let mut keep = Vec::new();
                    for (i, u) in pool.into_iter().enumerate() {
                        if !idx.contains(&i) {
                            keep.push(u);
                        }
                    }
                    pool = keep;
                    continue 'outer;
                }
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
        s += 1;
    }
    if rest.deg() > 0 {
        out.push(rest);
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Complete factorization; the result is verified by re-expansion.
pub fn factor(p: &IntPoly) -> Factorization {
    try_factor(p).expect("factorization re-expands to its input")
}

pub(crate) fn try_factor(p: &IntPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let sign: i8 = if p.leading().unwrap().sign() == Sign::Minus { -1 } else { 1 };
    let content = p.content();
    let prim = p.primitive_part();
    let mut factors = Vec::new();
    if prim.deg() > 0 {
        let fd = prim.derivative();
        let g = IntPoly::gcd(&prim, &fd);
        let sqfree = prim.div_exact(&g).expect("gcd divides").primitive_part();
        // Divide out powers of T first; the modular step prefers nonzero constant terms.
        let mut irreducibles = Vec::new();
        let mut core_part = sqfree;
        if core_part.coeff(0).is_zero() {
            irreducibles.push(IntPoly::from_i64(&[0, 1]));
            core_part = core_part.div_exact(&IntPoly::from_i64(&[0, 1])).unwrap();
        }
        if core_part.deg() > 0 {
            irreducibles.extend(zassenhaus(&core_part));
        }
        for q in irreducibles {
            let mut m = 0;
            let mut r = prim.clone();
            while let Some(nr) = r.div_exact(&q) {
                m += 1;
                r = nr;
            }
            factors.push((q, m));
        }
        factors.sort_by(|a, b| canonical_order(&a.0, &b.0));
    }
    let f = Factorization {
        sign,
        content,
        factors,
    };
    if &f.expand() != p || f.factors.iter().any(|(_, m)| *m == 0) {
        return Err(Error::Internal("factorization does not re-expand".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn factors_cube_example() {
        // 2T^3 - 3T + 1 = (T - 1)(2T^2 + 2T - 1)
        let f = factor(&p(&[1, -3, 0, 2]));
        assert_eq!(f.sign, 1);
        assert_eq!(f.content, BigInt::one());
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[-1, 2, 2]), 1)]);
    }

    #[test]
    fn repeated_and_content() {
        let f = factor(&p(&[-4, 0, 4]).mul(&p(&[1, 1])));
        assert_eq!(f.content, BigInt::from(4));
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 2)]);
        let f = factor(&p(&[0, 0, -3]));
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(p(&[0, 1]), 2)]);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10 x^2 + 1 is irreducible but splits modulo every prime.
        let f = factor(&p(&[1, 0, -10, 0, 1]));
        assert_eq!(f.factors.len(), 1);
        // (x^2 - 2)(x^2 - 3)(x^2 + x + 1)
        let prod = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1])).mul(&p(&[1, 1, 1]));
        let f = factor(&prod);
        assert_eq!(f.factors.len(), 3);
    }

    #[test]
    fn yun_decomposition() {
        let f = p(&[1, 1]).pow(3).mul(&p(&[-2, 0, 1])).mul(&p(&[0, 1]).pow(2));
        let d = squarefree_decomposition(&f);
        assert_eq!(d, vec![(p(&[-2, 0, 1]), 1), (p(&[0, 1]), 2), (p(&[1, 1]), 3)]);
    }

    #[test]
    fn irreducibility() {
        assert!(p(&[3, 2]).is_irreducible());
        assert!(!p(&[4, 2]).is_irreducible());
        assert!(p(&[-2, 0, 1]).is_irreducible());
        assert!(!p(&[-1, 0, 1]).is_irreducible());
        assert!(!p(&[7]).is_irreducible());
    }
}

//! Dense polynomials over a small prime field, constant term first.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Fp = Vec<u64>;

#[derive(Clone, Copy)]
pub(crate) struct Field {
    pub p: u64,
}

/// xorshift64*, fixed seed so factorizations are reproducible.
pub(crate) struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed | 1)
    }

    pub fn next(&mut self) -> u64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        self.0.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }
}

pub(crate) fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Fp) -> usize {
    a.len().saturating_sub(1)
}

impl Field {
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    pub fn poly_sub(&self, a: &Fp, b: &Fp) -> Fp {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn poly_mul(&self, a: &Fp, b: &Fp) -> Fp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn scale(&self, a: &Fp, k: u64) -> Fp {
        trim(a.iter().map(|&x| self.mul(x, k)).collect())
    }

    pub fn monic(&self, a: &Fp) -> Fp {
        match a.last() {
            Some(&l) => self.scale(a, self.inv(l)),
            None => Vec::new(),
        }
    }

    pub fn divrem(&self, a: &Fp, b: &Fp) -> (Fp, Fp) {
        let db = deg(b);
        let inv = self.inv(*b.last().expect("division by zero polynomial"));
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), trim(r));
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul(r[k + db], inv);
            q[k] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = self.sub(r[k + j], self.mul(c, bj));
                }
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(&self, a: &Fp, b: &Fp) -> Fp {
        self.divrem(a, b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Fp, b: &Fp) -> Fp {
        let mut x = trim(a.clone());
        let mut y = trim(b.clone());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &Fp, b: &Fp) -> (Fp, Fp, Fp) {
        let (mut r0, mut r1) = (trim(a.clone()), trim(b.clone()));
        let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            r0 = core::mem::replace(&mut r1, r);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            s0 = core::mem::replace(&mut s1, s2);
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            t0 = core::mem::replace(&mut t1, t2);
        }
        let l = self.inv(*r0.last().unwrap());
        (self.scale(&r0, l), self.scale(&s0, l), self.scale(&t0, l))
    }

    pub fn derivative(&self, a: &Fp) -> Fp {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul(c, i as u64 % self.p))
                .collect(),
        )
    }

    pub fn powmod(&self, base: &Fp, mut e: u128, m: &Fp) -> Fp {
        let mut r: Fp = vec![1];
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                r = self.rem(&self.poly_mul(&r, &b), m);
            }
            b = self.rem(&self.poly_mul(&b, &b), m);
            e >>= 1;
        }
        r
    }

    pub fn is_squarefree(&self, a: &Fp) -> bool {
        deg(&self.gcd(a, &self.derivative(a))) == 0
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf(&self, f: &Fp) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let x: Fp = vec![0, 1];
        let mut h = x.clone();
        let mut d = 1;
        while deg(&rest) >= 2 * d {
            h = self.powmod(&h, self.p as u128, &rest);
            let g = self.gcd(&self.poly_sub(&h, &x), &rest);
            if deg(&g) > 0 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if deg(&rest) > 0 {
            let dr = deg(&rest);
            out.push((rest, dr));
        }
        out
    }

    /// Split a product of distinct monic irreducibles of degree `d` (odd `p`).
    fn edf(&self, f: &Fp, d: usize, rng: &mut Rng, out: &mut Vec<Fp>) {
        let n = deg(f);
        if n == d {
            out.push(f.clone());
            return;
        }
        loop {
            let a: Fp = trim((0..n).map(|_| rng.next() % self.p).collect());
            if deg(&a) == 0 {
                continue;
            }
            // a^((p^d - 1)/2) = (a a^p ... a^(p^(d-1)))^((p-1)/2)
            let mut t = a.clone();
            let mut frob = a.clone();
            for _ in 1..d {
                frob = self.powmod(&frob, self.p as u128, f);
                t = self.rem(&self.poly_mul(&t, &frob), f);
            }
            let mut b = self.powmod(&t, (self.p as u128 - 1) / 2, f);
            b = self.poly_sub(&b, &vec![1]);
            let g = self.gcd(&b, f);
            let dg = g.len().saturating_sub(1);
            if dg > 0 && dg < n {
                let q = self.divrem(f, &g).0;
                self.edf(&g, d, rng, out);
                self.edf(&q, d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    pub fn factor_squarefree(&self, f: &Fp, seed: u64) -> Vec<Fp> {
        let mut rng = Rng::new(seed);
        let mut out = Vec::new();
        for (g, d) in self.ddf(f) {
            self.edf(&g, d, &mut rng, &mut out);
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_mod_seven() {
        let k = Field { p: 7 };
        // (x+1)(x+2)(x^2+1) mod 7; x^2+1 is irreducible since 7 = 3 mod 4
        let f = k.poly_mul(&k.poly_mul(&vec![1, 1], &vec![2, 1]), &vec![1, 0, 1]);
        let fs = k.factor_squarefree(&f, 1);
        assert_eq!(fs.len(), 3);
        let prod = fs.iter().fold(vec![1u64], |a, b| k.poly_mul(&a, b));
        assert_eq!(prod, f);
    }

    #[test]
    fn ext_gcd_identity() {
        let k = Field { p: 11 };
        let a = vec![3, 0, 1];
        let b = vec![1, 1];
        let (g, s, t) = k.ext_gcd(&a, &b);
        assert_eq!(g, vec![1]);
        let lhs = k.poly_sub(&k.poly_mul(&s, &a), &k.scale(&k.poly_mul(&t, &b), 10));
        assert_eq!(lhs, vec![1]);
    }
}

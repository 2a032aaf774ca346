//! Exact integer polynomials, stored constant term first.

mod factor;
mod modp;
mod roots;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::realnum::CertifiedReal;

pub use factor::{factor, squarefree_decomposition, Factorization};
pub use roots::{complex_roots_f64, nearest_root_distance_f64, real_roots, real_roots_squarefree, RootBox};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(alloc::vec![c])
    }

    /// `a T - b`.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::new(alloc::vec![-b, a])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Maximum absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Content removed and leading coefficient made positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = alloc::vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut acc = IntPoly::constant(BigInt::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `P(T + t)`.
    pub fn shift(&self, t: &BigInt) -> IntPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = &c[j + 1] * t;
                c[j] += add;
            }
        }
        IntPoly::new(c)
    }

    /// `Q` with `self = Q * d` over the integers, if it exists.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.deg();
        if n < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = alloc::vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let (qk, rem) = r[k + dd].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Pseudo-remainder of `self` by `d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.deg();
        let lc = d.leading().unwrap();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dd {
            let k = r.deg() - dd;
            let rl = r.leading().unwrap().clone();
            let mut next = r.scale(lc);
            for (j, c) in d.coeffs.iter().enumerate() {
                next.coeffs[k + j] -= &rl * c;
            }
            r = IntPoly::new(next.coeffs);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut x = a.primitive_part();
        let mut y = b.primitive_part();
        if x.is_zero() {
            return y;
        }
        while !y.is_zero() {
            let r = x.pseudo_rem(&y).primitive_part();
            x = y;
            y = r;
        }
        x
    }

    /// No repeated complex root; degree at least one.
    pub fn is_separable(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => IntPoly::gcd(self, &self.derivative()).deg() == 0,
        }
    }

    /// Primitive, of degree at least one, and irreducible over the rationals.
    pub fn is_irreducible(&self) -> bool {
        if self.deg() == 0 || !self.is_primitive() {
            return false;
        }
        let f = factor(self);
        f.factors.len() == 1 && f.factors[0].1 == 1
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Interval Horner evaluation, rounding outward to `2^-grid` after each step.
    pub fn eval_interval(&self, x: &DyadicInterval, grid: u32) -> DyadicInterval {
        let mut acc = DyadicInterval::from_int(&BigInt::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add_int(c).round_out(grid);
        }
        acc
    }

    /// Sign of `P(m / 2^s)`, exactly.
    pub fn sign_at_dyadic(&self, m: &BigInt, s: u32) -> core::cmp::Ordering {
        let d = self.deg() as u32;
        let mut acc = BigInt::zero();
        let mut pw = BigInt::one();
        // sum a_i m^i 2^{s(d-i)}
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &pw << (s * (d - i as u32));
            pw *= m;
        }
        acc.sign().cmp_zero()
    }
}

trait SignCmp {
    fn cmp_zero(self) -> core::cmp::Ordering;
}

impl SignCmp for num_bigint::Sign {
    fn cmp_zero(self) -> core::cmp::Ordering {
        match self {
            num_bigint::Sign::Minus => core::cmp::Ordering::Less,
            num_bigint::Sign::NoSign => core::cmp::Ordering::Equal,
            num_bigint::Sign::Plus => core::cmp::Ordering::Greater,
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{self}]")
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Comma separated coefficients, constant term first: `"1,-3,0,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Result<Vec<BigInt>> = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigInt>().map_err(|_| {
                    Error::InvalidArgument(String::from("bad coefficient '") + t + "'")
                })
            })
            .collect();
        Ok(IntPoly::new(parts?))
    }
}

/// A certified value `P(xi)`.
#[derive(Debug, Clone)]
pub struct CertifiedValue {
    pub interval: DyadicInterval,
    /// Bounds on `ln |P(xi)|`.
    pub ln_abs: (f64, f64),
    pub negative: bool,
    pub precision: u32,
}

impl CertifiedValue {
    pub fn ln_mid(&self) -> f64 {
        0.5 * (self.ln_abs.0 + self.ln_abs.1)
    }

    /// `|P(xi)|` as an interval.
    pub fn abs_interval(&self) -> DyadicInterval {
        self.interval.abs()
    }
}

/// Evaluate `P(xi)` until the enclosure excludes zero and `ln |P(xi)|` is
/// known to within `target_ln_width`.
pub fn eval_certified(p: &IntPoly, xi: &CertifiedReal, target_ln_width: f64) -> Result<CertifiedValue> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".to_string()));
    }
    if xi.is_known_root_of(p) {
        return Err(Error::PossibleRoot { degree: p.deg() });
    }
    let cap = xi.max_bits();
    let h_bits = p.height().bits() as u32;
    let mut prec = 96 + h_bits + 4 * p.deg() as u32;
    loop {
        let prec_eff = prec.min(cap);
        let x = xi.interval(prec_eff)?;
        let grid = prec_eff + 16 + h_bits;
        let v = p.eval_interval(&x, grid);
        if let Some((l, h)) = v.ln_abs() {
            if h - l <= target_ln_width {
                return Ok(CertifiedValue {
                    negative: v.hi().is_negative(),
                    interval: v,
                    ln_abs: (l, h),
                    precision: prec_eff,
                });
            }
        }
        if prec_eff >= cap {
            return if v.contains_zero() {
                Err(Error::PossibleRoot { degree: p.deg() })
            } else {
                Err(Error::PrecisionCap { cap })
            };
        }
        prec = prec_eff.saturating_mul(2);
    }
}

/// `H(QR) / (H(Q) H(R))`.
pub fn gelfond_ratio(q: &IntPoly, r: &IntPoly) -> Result<BigRational> {
    if q.is_zero() || r.is_zero() {
        return Err(Error::InvalidArgument("zero factor".to_string()));
    }
    Ok(BigRational::new(q.mul(r).height(), q.height() * r.height()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::NumberSpec;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn text_round_trip() {
        let q: IntPoly = "1,-3,0,2".parse().unwrap();
        assert_eq!(q, p(&[1, -3, 0, 2]));
        assert_eq!(q.to_string(), "1,-3,0,2");
        assert_eq!("0,0".parse::<IntPoly>().unwrap(), IntPoly::zero());
        assert!("1,x".parse::<IntPoly>().is_err());
    }

    #[test]
    fn basic_ops() {
        let a = p(&[1, 1]);
        assert_eq!(a.pow(2), p(&[1, 2, 1]));
        assert_eq!(p(&[1, 2, 1]).div_exact(&a), Some(a.clone()));
        assert_eq!(p(&[1, 2, 2]).div_exact(&a), None);
        assert_eq!(p(&[0, 0, 3]).derivative(), p(&[0, 6]));
        assert_eq!(p(&[0, 0, 1]).shift(&BigInt::from(1)), p(&[1, 2, 1]));
        assert_eq!(p(&[4, 6]).primitive_part(), p(&[2, 3]));
        assert_eq!(p(&[4, -6]).primitive_part(), p(&[-2, 3]));
        assert_eq!(IntPoly::gcd(&p(&[-1, 0, 1]), &p(&[1, 2, 1])), p(&[1, 1]));
    }

    #[test]
    fn separability() {
        assert!(!p(&[1, 2, 1]).is_separable());
        assert!(p(&[-2, 0, 1]).is_separable());
        assert!(!p(&[5]).is_separable());
        assert!(p(&[1, 3]).is_separable());
    }

    #[test]
    fn gelfond_ratio_examples() {
        let r = gelfond_ratio(&p(&[1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(2)));
        let r = gelfond_ratio(&p(&[-1, 1]), &p(&[1, 2])).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(1)));
    }

    #[test]
    fn certified_values() {
        let xi = CertifiedReal::new(NumberSpec::e_minus_2()).unwrap();
        let v = eval_certified(&p(&[-1, 0, 2]), &xi, 1e-12).unwrap();
        assert!((libm::exp(v.ln_mid()) - 0.0318575).abs() < 1e-6);
        assert!(!v.negative);
        let v = eval_certified(&p(&[-2, 3]), &xi, 1e-12).unwrap();
        assert!((libm::exp(v.ln_mid()) - 0.1548453).abs() < 1e-6);
        let half = CertifiedReal::new(NumberSpec::rational(1, 2)).unwrap();
        assert_eq!(
            eval_certified(&p(&[-1, 2]), &half, 1e-12).unwrap_err(),
            Error::PossibleRoot { degree: 1 }
        );
    }

    #[test]
    fn dyadic_sign() {
        let q = p(&[-1, 2]);
        assert_eq!(q.sign_at_dyadic(&BigInt::from(1), 1), core::cmp::Ordering::Equal);
        assert_eq!(q.sign_at_dyadic(&BigInt::from(3), 2), core::cmp::Ordering::Greater);
        assert_eq!(q.sign_at_dyadic(&BigInt::from(-3), 2), core::cmp::Ordering::Less);
    }
}

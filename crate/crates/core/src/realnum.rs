//! Certified real targets.
//!
//! Each [`NumberSpec`] produces a sequence of exact rational enclosures,
//! nested in the stage index, and [`refine`] turns one of them into a dyadic
//! interval of width at most `2^-p`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;

/// Growth rule for the exponents of a lacunary series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// `a_{k+1} = max(ceil(lambda * a_k), a_k + 1)`.
    Geometric(f64),
    /// `a_{k+1} = (k + 1) * a_k`; with `a_1 = 1` this is the classical constant.
    Factorial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    E,
    Ln2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NumberKind {
    Rational {
        num: BigInt,
        den: BigInt,
    },
    /// `sum_{k=1}^{terms} base^{-a_k}`; `terms = None` is the infinite series.
    LiouvilleSeries {
        base: u32,
        growth: Growth,
        a1: u64,
        terms: Option<u32>,
    },
    /// `[prefix; period, period, ...]` with the first prefix entry as the integer part.
    ContinuedFraction {
        prefix: Vec<u64>,
        period: Vec<u64>,
    },
    Classical(Constant),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumberSpec {
    pub kind: NumberKind,
    pub shift: i64,
}

impl NumberSpec {
    pub fn rational(num: i64, den: i64) -> Self {
        NumberSpec {
            kind: NumberKind::Rational {
                num: BigInt::from(num),
                den: BigInt::from(den),
            },
            shift: 0,
        }
    }

    pub fn liouville(base: u32, growth: Growth, a1: u64, terms: Option<u32>) -> Self {
        NumberSpec {
            kind: NumberKind::LiouvilleSeries {
                base,
                growth,
                a1,
                terms,
            },
            shift: 0,
        }
    }

    pub fn continued_fraction(prefix: Vec<u64>, period: Vec<u64>) -> Self {
        NumberSpec {
            kind: NumberKind::ContinuedFraction { prefix, period },
            shift: 0,
        }
    }

    pub fn classical(c: Constant) -> Self {
        NumberSpec {
            kind: NumberKind::Classical(c),
            shift: 0,
        }
    }

    /// `e - 2`, the usual representative in the unit interval.
    pub fn e_minus_2() -> Self {
        Self::classical(Constant::E).shifted(-2)
    }

    pub fn shifted(mut self, t: i64) -> Self {
        self.shift += t;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.into()));
        match &self.kind {
            NumberKind::Rational { den, .. } if den.is_zero() => bad("zero denominator"),
            NumberKind::LiouvilleSeries {
                base,
                growth,
                a1,
                terms,
            } => {
                if *base < 2 {
                    return bad("base must be at least 2");
                }
                if *a1 == 0 {
                    return bad("first exponent must be positive");
                }
                if let Growth::Geometric(l) = growth {
                    if !(l.is_finite() && *l >= 1.0) {
                        return bad("growth factor must be a finite number >= 1");
                    }
                }
                if *terms == Some(0) {
                    return bad("at least one term is required");
                }
                Ok(())
            }
            NumberKind::ContinuedFraction { prefix, period } => {
                if period.is_empty() {
                    return bad("period must be non-empty");
                }
                if period.contains(&0) || prefix.iter().skip(1).any(|&a| a == 0) {
                    return bad("partial quotients after the first must be positive");
                }
                if prefix.is_empty() && period[0] == 0 {
                    return bad("partial quotients must be positive");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Minimal polynomial of an eventually periodic continued fraction.
    pub fn quadratic_minpoly(&self) -> Option<IntPoly> {
        let NumberKind::ContinuedFraction { prefix, period } = &self.kind else {
            return None;
        };
        // (h, h_prev, k, k_prev) of the convergent matrix
        let mat = |qs: &[u64]| {
            let (mut h, mut hp, mut k, mut kp) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
            for &q in qs {
                let q = BigInt::from(q);
                (h, hp) = (&q * &h + &hp, h);
                (k, kp) = (&q * &k + &kp, k);
            }
            (h, hp, k, kp)
        };
        let (a, b, c, d) = mat(prefix);
        let (pm, pm1, qm, qm1) = mat(period);
        // tail y satisfies qm y^2 + (qm1 - pm) y - pm1 = 0, and y = u / v
        let u = IntPoly::new(alloc::vec![b, -d]);
        let v = IntPoly::new(alloc::vec![-a, c]);
        let m = u
            .mul(&u)
            .scale(&qm)
            .add(&u.mul(&v).scale(&(qm1 - pm)))
            .sub(&v.mul(&v).scale(&pm1))
            .shift(&BigInt::from(-self.shift))
            .primitive_part();
        Some(if m.leading()?.is_negative() { m.neg() } else { m })
    }

    /// Exact value when the spec denotes a rational number.
    pub fn exact_rational(&self) -> Option<BigRational> {
        let base = match &self.kind {
            NumberKind::Rational { num, den } => BigRational::new(num.clone(), den.clone()),
            NumberKind::LiouvilleSeries {
                base,
                growth,
                a1,
                terms: Some(t),
            } => {
                let ex = liouville_exponents(*growth, *a1, *t as usize);
                let last = *ex.last()?;
                let b = BigInt::from(*base);
                let mut num = BigInt::zero();
                let mut prev = 0u64;
                for &a in &ex {
                    num = num * num_traits::pow(b.clone(), (a - prev) as usize) + 1;
                    prev = a;
                }
                BigRational::new(num, num_traits::pow(b, last as usize))
            }
            _ => return None,
        };
        Some(base + BigInt::from(self.shift))
    }

    /// Bits needed to write the value as a fraction, for rational specs.
    fn rational_bits(&self) -> Option<u64> {
        match &self.kind {
            NumberKind::Rational { num, den } => Some(num.bits() + den.bits()),
            NumberKind::LiouvilleSeries {
                base,
                growth,
                a1,
                terms: Some(t),
            } => {
                let last = *liouville_exponents(*growth, *a1, *t as usize).last()?;
                Some(last.saturating_mul(32 - (*base - 1).leading_zeros() as u64).saturating_add(64))
            }
            _ => None,
        }
    }

    /// Unshifted rational enclosure of width at most `2^-(p+1)`.
    fn enclosure(&self, p: u32) -> Result<(BigRational, BigRational)> {
        let need = p as u64 + 1;
        match &self.kind {
            NumberKind::Rational { num, den } => {
                let v = BigRational::new(num.clone(), den.clone());
                Ok((v.clone(), v))
            }
            NumberKind::LiouvilleSeries {
                base,
                growth,
                a1,
                terms,
            } => Ok(liouville_enclosure(*base, *growth, *a1, *terms, need)),
            NumberKind::ContinuedFraction { prefix, period } => {
                Ok(cf_enclosure(prefix, period, need))
            }
            NumberKind::Classical(Constant::E) => Ok(e_enclosure(need)),
            NumberKind::Classical(Constant::Ln2) => Ok(ln2_enclosure(need)),
        }
    }
}

/// Exponents `a_1 < a_2 < ...`, saturating at `u64::MAX`.
pub fn liouville_exponents(growth: Growth, a1: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut a = a1;
    for k in 1..=count {
        out.push(a);
        a = next_exponent(growth, a, k as u64);
    }
    out
}

fn next_exponent(growth: Growth, a: u64, k: u64) -> u64 {
    match growth {
        Growth::Geometric(l) => {
            let g = libm::ceil(l * a as f64);
            let g = if g >= u64::MAX as f64 { u64::MAX } else { g as u64 };
            g.max(a.saturating_add(1))
        }
        Growth::Factorial => a.saturating_mul(k + 1),
    }
}

fn liouville_enclosure(
    base: u32,
    growth: Growth,
    a1: u64,
    terms: Option<u32>,
    need: u64,
) -> (BigRational, BigRational) {
    let log2b = libm::log2(base as f64);
    let b = BigInt::from(base);
    let mut num = BigInt::zero();
    let mut prev = 0u64;
    let mut a = a1;
    let mut k = 1u64;
    loop {
        num = num * num_traits::pow(b.clone(), (a - prev) as usize) + 1;
        prev = a;
        let next = next_exponent(growth, a, k);
        let last = terms.is_some_and(|t| k >= t as u64);
        // tail <= 2 base^{-a_{k+1}}; ask for one spare bit.
        if last || (next as f64) * log2b >= (need + 1) as f64 {
            let den = num_traits::pow(b.clone(), a as usize);
            let s = BigRational::new(num, den);
            if last {
                return (s.clone(), s);
            }
            let tail = BigRational::new(
                BigInt::from(base),
                num_traits::pow(b.clone(), next as usize) * BigInt::from(base - 1),
            );
            let hi = &s + tail;
            return (s, hi);
        }
        a = next;
        k += 1;
    }
}

fn cf_enclosure(prefix: &[u64], period: &[u64], need: u64) -> (BigRational, BigRational) {
    let quotient = |i: usize| -> u64 {
        if i < prefix.len() {
            prefix[i]
        } else {
            period[(i - prefix.len()) % period.len()]
        }
    };
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(quotient(0)), BigInt::one());
    let target = BigInt::one() << need;
    let mut i = 1;
    loop {
        let a = BigInt::from(quotient(i));
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q1 * &q2 >= target {
            let ordered = &p1 * &q2 <= &p2 * &q1;
            let x = BigRational::new_raw(p1, q1);
            let y = BigRational::new_raw(p2, q2);
            return if ordered { (x, y) } else { (y, x) };
        }
        p0 = core::mem::replace(&mut p1, p2);
        q0 = core::mem::replace(&mut q1, q2);
        i += 1;
    }
}

fn e_enclosure(need: u64) -> (BigRational, BigRational) {
    // S_N = A_N / N!, tail < 2/(N+1)!
    let target = BigUint::one() << (need + 1);
    let mut a = BigInt::from(2u32);
    let mut fact = BigUint::one();
    let mut n = 1u64;
    loop {
        let next_fact = &fact * (n + 1);
        if next_fact >= target {
            let lo = BigRational::new(a, BigInt::from(fact));
            let hi = &lo + BigRational::new(BigInt::from(2u32), BigInt::from(next_fact));
            return (lo, hi);
        }
        n += 1;
        fact = next_fact;
        a = a * n + 1;
    }
}

/// `sum_{k=a}^{b-1} 1/((2k+1) 9^k) = n / (q 9^{b-1})`.
fn atanh_split(a: u64, b: u64) -> (BigInt, BigInt) {
    if b - a == 1 {
        return (BigInt::one(), BigInt::from(2 * a + 1));
    }
    let m = (a + b) / 2;
    let (n1, q1) = atanh_split(a, m);
    let (n2, q2) = atanh_split(m, b);
    let nine = num_traits::pow(BigInt::from(9u32), (b - m) as usize);
    (n1 * &q2 * nine + n2 * &q1, q1 * q2)
}

fn ln2_enclosure(need: u64) -> (BigRational, BigRational) {
    // ln 2 = 2 atanh(1/3) = sum_k 2 / (3 (2k+1) 9^k); tail after N <= (9/8) t_{N+1}
    let lhs = BigUint::from(3u32) << need;
    let mut n = 0u64;
    loop {
        let rhs = BigUint::from(4 * (2 * n + 3)) * num_traits::pow(BigUint::from(9u32), (n + 1) as usize);
        if rhs >= lhs {
            break;
        }
        n += 1;
    }
    let (num, q) = atanh_split(0, n + 1);
    let den = q * num_traits::pow(BigInt::from(9u32), n as usize) * 3;
    let lo = BigRational::new(num * 2, den);
    let tail_den = BigInt::from(4 * (2 * n + 3)) * num_traits::pow(BigInt::from(9u32), (n + 1) as usize);
    let hi = &lo + BigRational::new(BigInt::from(3u32), tail_den);
    (lo, hi)
}

/// Interval of width at most `2^-p` containing the value of `spec`.
/// Results are nested in `p`.
pub fn refine(spec: &NumberSpec, p: u32) -> Result<DyadicInterval> {
    spec.validate()?;
    let (lo, hi) = spec.enclosure(p)?;
    let t = BigRational::from_integer(BigInt::from(spec.shift));
    Ok(DyadicInterval::from_ratio_bounds(&(lo + &t), &(hi + t), p + 2))
}

/// Replace `spec` by an equivalent spec with value in `[0, 1)`; also returns
/// the integer that was subtracted.
pub fn normalize_unit(spec: &NumberSpec, cap: u32) -> Result<(NumberSpec, i64)> {
    let mut p = 64;
    loop {
        let iv = refine(spec, p)?;
        let (fl, fh) = iv.floor_bounds();
        if fl == fh {
            let m: i64 = num_traits::ToPrimitive::to_i64(&fl)
                .ok_or_else(|| Error::InvalidSpec("integer part out of range".into()))?;
            return Ok((spec.clone().shifted(-m), m));
        }
        if p >= cap {
            return Err(Error::PrecisionCap { cap });
        }
        p = (p * 2).min(cap);
    }
}

const CACHE_BITS: u32 = 1024;

/// A target number together with a cached high-precision enclosure.
#[derive(Debug, Clone)]
pub struct CertifiedReal {
    spec: NumberSpec,
    cache: DyadicInterval,
    max_bits: u32,
    approx: f64,
    exact: Option<BigRational>,
    quadratic: Option<IntPoly>,
}

impl CertifiedReal {
    pub fn new(spec: NumberSpec) -> Result<Self> {
        Self::with_cap(spec, 65536)
    }

    pub fn with_cap(spec: NumberSpec, max_bits: u32) -> Result<Self> {
        let cache = refine(&spec, CACHE_BITS.min(max_bits))?;
        let approx = cache.mid_f64();
        let exact = match spec.rational_bits() {
            Some(b) if b <= max_bits as u64 => spec.exact_rational(),
            _ => None,
        };
        let quadratic = spec.quadratic_minpoly();
        Ok(CertifiedReal {
            spec,
            cache,
            max_bits,
            approx,
            exact,
            quadratic,
        })
    }

    pub fn spec(&self) -> &NumberSpec {
        &self.spec
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    /// Enclosure of width at most `2^-p`.
    pub fn interval(&self, p: u32) -> Result<DyadicInterval> {
        if p > self.max_bits {
            return Err(Error::PrecisionCap { cap: self.max_bits });
        }
        if p <= CACHE_BITS.min(self.max_bits) {
            return Ok(self.cache.round_out(p + 2));
        }
        refine(&self.spec, p)
    }

    /// The exact value of a rational target whose size fits in the precision
    /// cap. Larger rationals are handled like irrationals, through intervals.
    pub fn exact_rational(&self) -> Option<BigRational> {
        self.exact.clone()
    }

    /// Minimal polynomial when the target is a known quadratic irrational.
    pub fn quadratic(&self) -> Option<&IntPoly> {
        self.quadratic.as_ref()
    }

    /// Whether `p` is known to vanish at the target without evaluating it.
    pub fn is_known_root_of(&self, p: &IntPoly) -> bool {
        if p.is_zero() {
            return true;
        }
        if let Some(q) = &self.exact {
            return p.eval_rational(q).is_zero();
        }
        self.quadratic.as_ref().is_some_and(|m| p.div_exact(m).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn liouville_four_terms_is_exact() {
        let s = NumberSpec::liouville(2, Growth::Geometric(4.0), 1, Some(4));
        let iv = refine(&s, 200).unwrap();
        let expect = BigRational::new(
            (BigInt::one() << 63u32) + (BigInt::one() << 60u32) + (BigInt::one() << 48u32) + 1,
            BigInt::one() << 64u32,
        );
        assert!(iv.lo_ratio() <= expect && expect <= iv.hi_ratio());
        assert!(iv.is_point());
        assert_eq!(s.exact_rational().unwrap(), expect);
    }

    #[test]
    fn factorial_schedule() {
        assert_eq!(
            liouville_exponents(Growth::Factorial, 1, 6),
            [1, 2, 6, 24, 120, 720]
        );
        assert_eq!(
            liouville_exponents(Growth::Geometric(4.0), 1, 4),
            [1, 4, 16, 64]
        );
        assert_eq!(
            liouville_exponents(Growth::Geometric(1.0), 3, 3),
            [3, 4, 5]
        );
    }

    #[test]
    fn e_minus_two_digits() {
        let iv = refine(&NumberSpec::e_minus_2(), 60).unwrap();
        assert!((iv.mid_f64() - 0.718281828459045).abs() < 1e-15);
        assert!(iv.width_within(60));
    }

    #[test]
    fn ln2_digits() {
        let iv = refine(&NumberSpec::classical(Constant::Ln2), 60).unwrap();
        assert!((iv.mid_f64() - core::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn golden_ratio_cf() {
        let s = NumberSpec::continued_fraction(alloc::vec![1], alloc::vec![1]);
        let iv = refine(&s, 80).unwrap();
        assert!((iv.mid_f64() - 1.618033988749895).abs() < 1e-15);
        let s = NumberSpec::continued_fraction(alloc::vec![], alloc::vec![2]);
        let iv = refine(&s, 80).unwrap();
        assert!((iv.mid_f64() - (1.0 + libm::sqrt(2.0))).abs() < 1e-15);
    }

    #[test]
    fn periodic_fractions_know_their_minimal_polynomial() {
        let phi = NumberSpec::continued_fraction(alloc::vec![1], alloc::vec![1]);
        assert_eq!(phi.quadratic_minpoly().unwrap(), IntPoly::from_i64(&[-1, -1, 1]));
        let s = NumberSpec::continued_fraction(alloc::vec![], alloc::vec![2]).shifted(-2);
        assert_eq!(s.quadratic_minpoly().unwrap(), IntPoly::from_i64(&[-1, 2, 1]));
        // 1 + 1/(2 + 1/y) with y = (3 + sqrt 13)/2
        let y = (3.0 + libm::sqrt(13.0)) / 2.0;
        let x = 1.0 + 1.0 / (2.0 + 1.0 / y);
        let s = NumberSpec::continued_fraction(alloc::vec![1, 2], alloc::vec![3]);
        let m = s.quadratic_minpoly().unwrap();
        assert_eq!(m.deg(), 2);
        assert!(m.eval_f64(x).abs() < 1e-12);
        let t = CertifiedReal::new(s).unwrap();
        assert!(t.is_known_root_of(&m.mul(&IntPoly::from_i64(&[3, 1]))));
        assert!(!t.is_known_root_of(&IntPoly::from_i64(&[3, 1])));
        assert!(NumberSpec::e_minus_2().quadratic_minpoly().is_none());
    }

    #[test]
    fn rational_is_exact_point() {
        let iv = refine(&NumberSpec::rational(1, 2), 10).unwrap();
        assert!(iv.is_point());
        assert_eq!(iv.lo_ratio(), ratio(1, 2));
    }

    #[test]
    fn invalid_specs() {
        assert!(refine(&NumberSpec::rational(1, 0), 10).is_err());
        assert!(refine(&NumberSpec::liouville(1, Growth::Factorial, 1, None), 10).is_err());
        assert!(refine(&NumberSpec::liouville(2, Growth::Geometric(0.5), 1, None), 10).is_err());
        assert!(refine(&NumberSpec::continued_fraction(alloc::vec![0], alloc::vec![]), 10).is_err());
    }

    #[test]
    fn normalize_examples() {
        let s = NumberSpec::classical(Constant::E);
        let (n, m) = normalize_unit(&s, 4096).unwrap();
        assert_eq!(m, 2);
        assert!((refine(&n, 50).unwrap().mid_f64() - 0.718281828459045).abs() < 1e-14);
        let (n, m) = normalize_unit(&NumberSpec::rational(7, 1), 4096).unwrap();
        assert_eq!(m, 7);
        assert_eq!(refine(&n, 10).unwrap().lo_ratio(), ratio(0, 1));
        let (_, m) = normalize_unit(&NumberSpec::rational(-1, 3), 4096).unwrap();
        assert_eq!(m, -1);
    }

    #[test]
    fn cache_and_fresh_agree() {
        let x = CertifiedReal::new(NumberSpec::classical(Constant::Ln2)).unwrap();
        let a = x.interval(1000).unwrap();
        let b = x.interval(1500).unwrap();
        assert!(b.is_subset_of(&a));
        assert!(b.width_within(1500));
        assert!(x.interval(70000).is_err());
    }
}

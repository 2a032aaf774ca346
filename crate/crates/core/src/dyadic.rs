//! Closed intervals with dyadic endpoints `[lo, hi] / 2^scale`.
//!
//! All arithmetic is exact on the integer endpoints; precision is only ever
//! dropped through [`DyadicInterval::round_out`], which widens.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const LN_2: f64 = core::f64::consts::LN_2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
}

pub(crate) fn floor_shr(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    if m.is_negative() {
        let mag = m.magnitude();
        let bump = (BigUint::one() << k) - 1u32;
        -BigInt::from((mag + bump) >> k)
    } else {
        m >> k
    }
}

pub(crate) fn ceil_shr(m: &BigInt, k: u32) -> BigInt {
    -floor_shr(&-m, k)
}

/// `m / 2^s` rounded to nearest `f64`, with graceful underflow/overflow.
pub fn scaled_to_f64(m: &BigInt, s: u32) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits();
    let shift = bits.saturating_sub(64);
    let top = (m.magnitude() >> shift).to_u64().unwrap_or(u64::MAX) as f64;
    let exp = shift as i64 - s as i64;
    let v = libm::ldexp(top, exp.clamp(-4000, 4000) as i32);
    if m.is_negative() {
        -v
    } else {
        v
    }
}

/// Natural log of `mag / 2^s` for a positive integer `mag`, with an
/// absolute error bound.
pub fn ln_scaled(mag: &BigUint, s: u32) -> (f64, f64) {
    let bits = mag.bits();
    let shift = bits.saturating_sub(62);
    let top = (mag >> shift).to_u64().unwrap_or(1) as f64;
    let v = libm::log(top) + (shift as f64 - s as f64) * LN_2;
    // top has at least 61 significant bits when shifted, so truncation costs < 2^-60.
    let err = 1e-15 * (1.0 + libm::fabs(v));
    (v, err)
}

impl DyadicInterval {
    pub fn new(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        debug_assert!(lo <= hi);
        DyadicInterval { lo, hi, scale }
    }

    pub fn point(v: BigInt, scale: u32) -> Self {
        DyadicInterval {
            lo: v.clone(),
            hi: v,
            scale,
        }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::point(n.clone(), 0)
    }

    /// Smallest interval on the grid `2^-grid` containing `[lo, hi]`.
    pub fn from_ratio_bounds(lo: &BigRational, hi: &BigRational, grid: u32) -> Self {
        let l = (lo.numer() << grid).div_floor(lo.denom());
        let h = -((-(hi.numer() << grid)).div_floor(hi.denom()));
        DyadicInterval {
            lo: l,
            hi: h,
            scale: grid,
        }
    }

    pub fn lo(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi(&self) -> &BigInt {
        &self.hi
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn lo_ratio(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.scale)
    }

    pub fn hi_ratio(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.scale)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn at_scale(&self, s: u32) -> (BigInt, BigInt) {
        debug_assert!(s >= self.scale);
        let k = s - self.scale;
        (&self.lo << k, &self.hi << k)
    }

    /// Widen onto the coarser grid `2^-s`. No-op when already coarser.
    pub fn round_out(&self, s: u32) -> Self {
        if s >= self.scale {
            return self.clone();
        }
        let k = self.scale - s;
        DyadicInterval {
            lo: floor_shr(&self.lo, k),
            hi: ceil_shr(&self.hi, k),
            scale: s,
        }
    }

    /// True when `hi - lo <= 2^-p`.
    pub fn width_within(&self, p: u32) -> bool {
        let w = &self.hi - &self.lo;
        (w << p) <= (BigInt::one() << self.scale)
    }

    /// `log2(hi - lo)`, or `-inf` for a point.
    pub fn width_log2(&self) -> f64 {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_scaled(w.magnitude(), self.scale).0 / LN_2
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(Ordering)` of the whole interval against zero when it excludes 0.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn align(&self, o: &Self) -> (BigInt, BigInt, BigInt, BigInt, u32) {
        let s = self.scale.max(o.scale);
        let (a, b) = self.at_scale(s);
        let (c, d) = o.at_scale(s);
        (a, b, c, d, s)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b, c, d, s) = self.align(o);
        DyadicInterval::new(a + c, b + d, s)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let (a, b, c, d, s) = self.align(o);
        DyadicInterval::new(a - d, b - c, s)
    }

    pub fn neg(&self) -> Self {
        DyadicInterval::new(-&self.hi, -&self.lo, self.scale)
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        let sh = k << self.scale;
        DyadicInterval::new(&self.lo + &sh, &self.hi + &sh, self.scale)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            DyadicInterval::new(b, a, self.scale)
        } else {
            DyadicInterval::new(a, b, self.scale)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let s = self.scale + o.scale;
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return DyadicInterval::new(&self.lo * &o.lo, &self.hi * &o.hi, s);
        }
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = p[0].clone();
        let mut hi = p[0].clone();
        for v in &p[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        DyadicInterval::new(lo, hi, s)
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = if self.lo.magnitude() > self.hi.magnitude() {
                -&self.lo
            } else {
                self.hi.clone()
            };
            DyadicInterval::new(BigInt::zero(), m, self.scale)
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: u32) -> Self {
        if k <= self.scale {
            DyadicInterval::new(self.lo.clone(), self.hi.clone(), self.scale - k)
        } else {
            let e = k - self.scale;
            DyadicInterval::new(&self.lo << e, &self.hi << e, 0)
        }
    }

    /// `self ⊆ o`.
    pub fn is_subset_of(&self, o: &Self) -> bool {
        let (a, b, c, d, _) = self.align(o);
        c <= a && b <= d
    }

    pub fn intersects(&self, o: &Self) -> bool {
        let (a, b, c, d, _) = self.align(o);
        a <= d && c <= b
    }

    /// Certainly `self < o` pointwise.
    pub fn certainly_lt(&self, o: &Self) -> bool {
        let (_, b, c, _, _) = self.align(o);
        b < c
    }

    /// Certainly `self <= o` pointwise.
    pub fn certainly_le(&self, o: &Self) -> bool {
        let (_, b, c, _, _) = self.align(o);
        b <= c
    }

    pub fn lo_f64(&self) -> f64 {
        scaled_to_f64(&self.lo, self.scale)
    }

    pub fn hi_f64(&self) -> f64 {
        scaled_to_f64(&self.hi, self.scale)
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.scale + 1)
    }

    /// Rigorous bounds on `ln |x|` over the interval, `None` if it meets 0.
    pub fn ln_abs(&self) -> Option<(f64, f64)> {
        if self.contains_zero() {
            return None;
        }
        let (small, big) = if self.lo.is_positive() {
            (&self.lo, &self.hi)
        } else {
            (&self.hi, &self.lo)
        };
        let (l, el) = ln_scaled(small.magnitude(), self.scale);
        let (h, eh) = ln_scaled(big.magnitude(), self.scale);
        Some((l - el, h + eh))
    }

    /// Exact `floor` of both endpoints.
    pub fn floor_bounds(&self) -> (BigInt, BigInt) {
        (
            floor_shr(&self.lo, self.scale),
            floor_shr(&self.hi, self.scale),
        )
    }

    /// Hull of two intervals.
    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `o`.
    pub fn max(&self, o: &Self) -> Self {
        let s = self.scale.max(o.scale);
        let (a, b) = (self.at_scale(s), o.at_scale(s));
        DyadicInterval {
            lo: a.0.max(b.0),
            hi: a.1.max(b.1),
            scale: s,
        }
    }

    pub fn hull(&self, o: &Self) -> Self {
        let (a, b, c, d, s) = self.align(o);
        DyadicInterval::new(a.min(c), b.max(d), s)
    }

    pub fn sign_of_int(n: &BigInt) -> Sign {
        n.sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn di(lo: i64, hi: i64, s: u32) -> DyadicInterval {
        DyadicInterval::new(BigInt::from(lo), BigInt::from(hi), s)
    }

    #[test]
    fn shifts_round_outward() {
        assert_eq!(floor_shr(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(ceil_shr(&BigInt::from(-5), 1), BigInt::from(-2));
        assert_eq!(floor_shr(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(ceil_shr(&BigInt::from(5), 1), BigInt::from(3));
        let r = di(-5, 5, 2).round_out(0);
        assert_eq!(r, di(-2, 2, 0));
    }

    #[test]
    fn mul_handles_signs() {
        let a = di(-1, 2, 0);
        let b = di(-3, 1, 0);
        assert_eq!(a.mul(&b), di(-6, 3, 0));
        assert_eq!(di(2, 3, 1).mul(&di(1, 1, 1)), di(2, 3, 2));
    }

    #[test]
    fn width_and_logs() {
        let a = di(1, 3, 4);
        assert!(a.width_within(3));
        assert!(!a.width_within(4));
        let (l, h) = di(3 << 10, 3 << 10, 10).ln_abs().unwrap();
        assert!(l <= libm::log(3.0) && libm::log(3.0) <= h);
        assert!(h - l < 1e-13);
        assert!(di(-1, 1, 0).ln_abs().is_none());
    }

    #[test]
    fn ratio_bounds_enclose() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let d = DyadicInterval::from_ratio_bounds(&third, &third, 20);
        assert!(d.lo_ratio() <= third && third <= d.hi_ratio());
        assert!(d.width_within(19));
        let neg = -third;
        let d = DyadicInterval::from_ratio_bounds(&neg, &neg, 20);
        assert!(d.lo_ratio() <= neg && neg <= d.hi_ratio());
    }

    #[test]
    fn f64_conversion_of_huge_and_tiny() {
        let big = BigInt::one() << 3000u32;
        assert_eq!(scaled_to_f64(&big, 2990), 1024.0);
        assert_eq!(scaled_to_f64(&BigInt::from(-3), 1), -1.5);
    }
}

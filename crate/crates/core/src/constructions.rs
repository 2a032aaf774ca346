//! Explicit constructions at finite height: continued-fraction convergents,
//! the power-of-a-convergent witness for large `kappa`, the determinant pair
//! of linear forms, the separable-exponent check built on it, and the factor
//! certificate bounding `kappa` through the factorization of `P_X`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bestapprox::{best_polys, compare_values, SearchClass, Strategy};
use crate::bounds::liouville_constant;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exponents::{local_exponents, BestApproxRecord};
use crate::intpoly::{eval_certified, factor, CertifiedValue, IntPoly};
use crate::realnum::CertifiedReal;

const LN_WIDTH: f64 = 1e-12;

fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return libm::log(v.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 60;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// A convergent `b/a` written as the linear form `a T - b`.
#[derive(Debug, Clone)]
pub struct ConvergentRecord {
    /// Position in the full convergent sequence, starting at 0.
    pub index: usize,
    pub a: BigInt,
    pub b: BigInt,
    /// The preceding convergent `(a', b')`, `(0, 1)` before the first.
    pub prev: (BigInt, BigInt),
    pub poly: IntPoly,
    pub height: BigInt,
    pub value: CertifiedValue,
    /// `-ln |Q(xi)| / ln H_Q`; undefined for height 1.
    pub lambda_eff: Option<f64>,
}

impl ConvergentRecord {
    fn new(index: usize, a: BigInt, b: BigInt, prev: (BigInt, BigInt), xi: &CertifiedReal) -> Result<Self> {
        let poly = IntPoly::linear(a.clone(), b.clone());
        let height = poly.height();
        let value = eval_certified(&poly, xi, LN_WIDTH)?;
        let lambda_eff = (height > BigInt::one()).then(|| -value.ln_mid() / ln_big(&height));
        Ok(ConvergentRecord {
            index,
            a,
            b,
            prev,
            poly,
            height,
            value,
            lambda_eff,
        })
    }

    pub fn prev_poly(&self) -> IntPoly {
        IntPoly::linear(self.prev.0.clone(), self.prev.1.clone())
    }
}

fn floor_ratio(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Partial quotients shared by every real in `[lo, hi]`; `true` when the
/// expansion of a rational point ended.
fn common_quotients(lo: &BigRational, hi: &BigRational, limit: usize) -> (Vec<BigInt>, bool) {
    let (mut x, mut y) = (lo.clone(), hi.clone());
    let mut out = Vec::new();
    while out.len() < limit {
        let (a, b) = (floor_ratio(&x), floor_ratio(&y));
        if a != b {
            return (out, false);
        }
        let fx = &x - BigRational::from_integer(a.clone());
        let fy = &y - BigRational::from_integer(a.clone());
        out.push(a);
        if fx.is_zero() || fy.is_zero() {
            return (out, fx.is_zero() && fy.is_zero());
        }
        x = fy.recip();
        y = fx.recip();
    }
    (out, false)
}

fn quotients(xi: &CertifiedReal, count: usize) -> Result<(Vec<BigInt>, bool)> {
    if let Some(q) = xi.exact_rational() {
        return Ok(common_quotients(&q, &q, count));
    }
    let mut bits = 128u32;
    loop {
        let b = bits.min(xi.max_bits());
        let iv = xi.interval(b)?;
        let (qs, ended) = common_quotients(&iv.lo_ratio(), &iv.hi_ratio(), count);
        if qs.len() >= count || ended {
            return Ok((qs, ended));
        }
        if b >= xi.max_bits() {
            return Err(Error::PrecisionCap { cap: xi.max_bits() });
        }
        bits = b * 2;
    }
}

/// The first `count` continued-fraction convergents of `xi`, each with a
/// certified nonzero `|q xi - p|`. For a rational target the sequence stops
/// before the convergent equal to `xi`.
pub fn convergents(xi: &CertifiedReal, count: usize) -> Result<Vec<ConvergentRecord>> {
    let (qs, ended) = quotients(xi, count + 1)?;
    let mut out = Vec::new();
    // indices -2 and -1
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for (i, a) in qs.iter().enumerate() {
        if out.len() >= count || (ended && i + 1 == qs.len()) {
            break;
        }
        let pn = a * &p1 + &p2;
        let qn = a * &q1 + &q2;
        out.push(ConvergentRecord::new(i, qn.clone(), pn.clone(), (q1.clone(), p1.clone()), xi)?);
        p2 = core::mem::replace(&mut p1, pn);
        q2 = core::mem::replace(&mut q1, qn);
    }
    Ok(out)
}

/// Convergents with `lambda_eff >= min_lambda`, in order. Gives up once
/// denominators need more than half the precision cap.
pub fn principal_convergents(xi: &CertifiedReal, count: usize, min_lambda: f64) -> Result<Vec<ConvergentRecord>> {
    let mut take = 16usize;
    loop {
        let all = convergents(xi, take)?;
        let done = all.len() < take;
        let good: Vec<ConvergentRecord> = all
            .iter()
            .filter(|c| c.lambda_eff.is_some_and(|l| l >= min_lambda))
            .cloned()
            .collect();
        if good.len() >= count {
            return Ok(good.into_iter().take(count).collect());
        }
        let too_deep = all.last().is_some_and(|c| c.height.bits() as u32 * 2 > xi.max_bits() / 2);
        if done || too_deep {
            return Err(Error::NoCandidate(
                "not enough convergents of the requested quality within the precision cap".into(),
            ));
        }
        take *= 2;
    }
}

/// Certified finite-height evidence that `kappa(n, xi, X)` is large at
/// `X = H(Q^k)`.
#[derive(Debug, Clone)]
pub struct KappaWitness {
    pub n: usize,
    pub k: u32,
    pub convergent: ConvergentRecord,
    /// `H(Q^k)`.
    pub x: BigInt,
    pub witness: IntPoly,
    /// From `|R(xi)| = |Q(xi)|^k` and the minimality of `P_X`.
    pub w_lower: f64,
    /// Bounds on `ln(H_Q |xi - b/a|)`.
    pub ln_root_objective: (f64, f64),
    /// Lower bound on `H(eta) |xi - eta|` over every other algebraic `eta`
    /// of degree `<= n` and height `<= X`; may be nonpositive (no information).
    pub exclusion: f64,
    /// `b/a` is certified to be the best algebraic approximation at `X`.
    pub root_is_best: bool,
    pub wstar_upper: f64,
    pub kappa_lower: f64,
    /// `(1 - 1/k) lambda_eff`.
    pub asymptotic: f64,
    /// `lambda_eff` above which the asymptotic bound exceeds `n - 1`.
    pub threshold_lambda: f64,
}

/// The witness `R = Q^k` for a convergent `Q = aT - b` of quality
/// `lambda_eff > n + k - 1`.
pub fn theorem_co_witness(n: usize, k: u32, conv: &ConvergentRecord, xi: &CertifiedReal) -> Result<KappaWitness> {
    if k < 2 || k as usize > n {
        return Err(Error::InvalidArgument("the witness needs 2 <= k <= n".into()));
    }
    let lambda = conv
        .lambda_eff
        .ok_or_else(|| Error::InvalidArgument("convergent of height 1".into()))?;
    let need = (n + k as usize - 1) as f64;
    if !(lambda > need) {
        return Err(Error::InvalidArgument(alloc::format!(
            "hypothesis fails: lambda_eff = {lambda:.6} is not above n + k - 1 = {need}"
        )));
    }
    let witness = conv.poly.pow(k);
    let x = witness.height();
    let lx = ln_big(&x);
    let (ql, qh) = conv.value.ln_abs;
    let w_lower = -eval_certified(&witness, xi, LN_WIDTH)?.ln_abs.1 / lx;

    // H_Q |xi - b/a| = H_Q |Q(xi)| / a
    let ln_ratio = ln_big(&conv.height) - ln_big(&conv.a);
    let ln_root_objective = (ql + ln_ratio, qh + ln_ratio);
    let dist_hi = libm::exp(qh - ln_big(&conv.a)) * (1.0 + 1e-12);
    let hq = conv.height.to_f64().unwrap_or(f64::INFINITY);
    let xf = x.to_f64().unwrap_or(f64::INFINITY);
    // |b/a - eta| >= c(1, m) H_Q^{-m} H(eta)^{-1}, so
    // H(eta) |xi - eta| >= c(1, m) H_Q^{-m} - X |xi - b/a|
    let exclusion = (1..=n)
        .map(|m| liouville_constant(1, m) * libm::pow(hq, -(m as f64)))
        .fold(f64::INFINITY, f64::min)
        * (1.0 - 1e-12)
        - xf * dist_hi;
    let root_hi = libm::exp(ln_root_objective.1);
    let root_is_best = exclusion > root_hi;
    let min_lower = if exclusion > 0.0 {
        libm::exp(ln_root_objective.0).min(exclusion)
    } else {
        0.0
    };
    let wstar_upper = if min_lower > 0.0 {
        -libm::log(min_lower) / lx
    } else {
        f64::INFINITY
    };
    let kf = k as f64;
    Ok(KappaWitness {
        n,
        k,
        convergent: conv.clone(),
        x,
        witness,
        w_lower,
        ln_root_objective,
        exclusion,
        root_is_best,
        wstar_upper,
        kappa_lower: w_lower - wstar_upper,
        asymptotic: (1.0 - 1.0 / kf) * lambda,
        threshold_lambda: kf * (n as f64 - 1.0) / (kf - 1.0),
    })
}

/// The convergent polynomial `P` and the linear `R` minimizing `|R(xi)|` among
/// linear polynomials of height `<= C H_P^lambda` that are not multiples of `P`.
#[derive(Debug, Clone)]
pub struct LemurPair {
    pub p: IntPoly,
    pub r: IntPoly,
    pub c: f64,
    pub lambda: f64,
    pub height_bound: BigInt,
    pub p_value: CertifiedValue,
    pub r_value: CertifiedValue,
    /// Bounds on `|R(xi)| H_P`.
    pub ratio: (f64, f64),
    /// `1 - |P(xi)| H_R`, the lower bound for `ratio` from the determinant.
    pub determinant_lower: f64,
    /// `1 / C`, the upper bound from Dirichlet's theorem.
    pub dirichlet_upper: f64,
}

pub fn lemur_pair(xi: &CertifiedReal, conv: &ConvergentRecord, c: f64) -> Result<LemurPair> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::InvalidArgument("C must lie in (0, 1/2)".into()));
    }
    let lambda = conv
        .lambda_eff
        .ok_or_else(|| Error::InvalidArgument("convergent of height 1".into()))?;
    if lambda < 1.0 {
        return Err(Error::InvalidArgument("convergent quality below 1".into()));
    }
    let hp = &conv.height;
    let ln_y = libm::log(c) + lambda * ln_big(hp);
    if ln_y > 60.0 * core::f64::consts::LN_2 {
        return Err(Error::InvalidArgument("height bound C H_P^lambda beyond 2^60".into()));
    }
    let y = BigInt::from(libm::floor(libm::exp(ln_y)) as i64);
    let p = conv.poly.clone();
    let prev = conv.prev_poly();
    // Q = u P + v P' with v != 0; |v| = |det(Q, P)| <= Y |P(xi)| + H_P |Q(xi)|.
    let lp = p.eval_f64(xi.approx());
    let lq = prev.eval_f64(xi.approx());
    let yf = y.to_f64().unwrap();
    let hpf = hp.to_f64().unwrap_or(f64::INFINITY);
    let mut best_bound = if prev.height() <= y { libm::fabs(lq) } else { f64::INFINITY };
    let mut cands: Vec<IntPoly> = Vec::new();
    let mut v = 1i64;
    loop {
        let vmax = yf * libm::fabs(lp) + hpf * best_bound.min(1.0 / c);
        if v as f64 > vmax * (1.0 + 1e-9) + 1.0 {
            break;
        }
        if let Some((lo, hi)) = u_range(&p, &prev, v, &y) {
            let ustar = -(v as f64) * lq / lp;
            let mut us = Vec::new();
            for t in [libm::floor(ustar), libm::ceil(ustar)] {
                let t = BigInt::from(t as i64).clamp(lo.clone(), hi.clone());
                if !us.contains(&t) {
                    us.push(t);
                }
            }
            for u in us {
                let q = p.scale(&u).add(&prev.scale(&BigInt::from(v)));
                let val = libm::fabs(q.eval_f64(xi.approx()));
                best_bound = best_bound.min(val);
                cands.push(q);
            }
        }
        v += 1;
        if v > 1_000_000 {
            return Err(Error::BudgetExceeded { budget: 1_000_000 });
        }
    }
    let mut best: Option<(IntPoly, CertifiedValue)> = None;
    for q in cands {
        let q = if q.leading().is_some_and(|l| l.is_negative()) { q.neg() } else { q };
        let val = eval_certified(&q, xi, LN_WIDTH)?;
        best = Some(match best {
            None => (q, val),
            Some((bq, bv)) => match compare_values(&q, &val.abs_interval(), &bq, &bv.abs_interval(), xi)? {
                Some(Ordering::Less) => (q, val),
                Some(_) => (bq, bv),
                None if q.coeffs() < bq.coeffs() => (q, val),
                None => (bq, bv),
            },
        });
    }
    let (r, r_value) = best.ok_or_else(|| Error::NoCandidate("no linear form outside the span of P".into()))?;
    let lh = ln_big(hp);
    let ratio = (libm::exp(r_value.ln_abs.0 + lh), libm::exp(r_value.ln_abs.1 + lh));
    let determinant_lower = 1.0 - libm::exp(conv.value.ln_abs.1 + ln_big(&r.height()));
    Ok(LemurPair {
        p,
        r,
        c,
        lambda,
        height_bound: y,
        p_value: conv.value.clone(),
        r_value,
        ratio,
        determinant_lower,
        dirichlet_upper: 1.0 / c,
    })
}

/// Integer `u` with `|u P_i + v P'_i| <= Y` for both coefficients.
fn u_range(p: &IntPoly, prev: &IntPoly, v: i64, y: &BigInt) -> Option<(BigInt, BigInt)> {
    let vb = BigInt::from(v);
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for i in 0..2 {
        let a = p.coeff(i);
        let b = prev.coeff(i) * &vb;
        if a.is_zero() {
            if b.abs() > *y {
                return None;
            }
            continue;
        }
        // -Y <= u a + b <= Y
        let (l, h) = if a.is_positive() {
            (ceil_div(&(-y - &b), &a), (y - &b).div_floor(&a))
        } else {
            (ceil_div(&(y - &b), &a), (-y - &b).div_floor(&a))
        };
        lo = Some(lo.map_or(l.clone(), |x| x.max(l)));
        hi = Some(hi.map_or(h.clone(), |x| x.min(h)));
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// The separable-exponent check at `X = H_P^{lambda - 1 - eps}`.
#[derive(Debug, Clone)]
pub struct LiouCheck {
    pub pair: LemurPair,
    pub eps: f64,
    pub x: f64,
    pub v1: IntPoly,
    pub v2: IntPoly,
    pub ln_v1: (f64, f64),
    pub ln_v2: (f64, f64),
    /// `-ln |V_1(xi)| / ln X`, a lower bound for `w(2, xi, X)`.
    pub w_witness: f64,
    pub w: Option<f64>,
    pub w_sep: Option<f64>,
    pub separable_poly: Option<IntPoly>,
    /// `1 + (2 + eps) / (lambda - 1 - eps)`.
    pub bound: f64,
    pub slack: f64,
    pub exhaustive: bool,
    pub note: Option<String>,
}

impl LiouCheck {
    pub fn holds(&self) -> Option<bool> {
        self.w_sep.map(|s| s <= self.bound + self.slack)
    }

    pub fn gap(&self) -> Option<f64> {
        Some(self.w? - self.w_sep?)
    }
}

/// The determinant constant used to pick `R` in the separable check.
pub const LIOU_C: f64 = 0.25;

pub fn theorem_liou_check(
    xi: &CertifiedReal,
    conv: &ConvergentRecord,
    eps: f64,
    strategy: Strategy,
    tol: &Tolerances,
) -> Result<LiouCheck> {
    let lambda = conv
        .lambda_eff
        .ok_or_else(|| Error::InvalidArgument("convergent of height 1".into()))?;
    if !(lambda > 3.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "hypothesis fails: lambda_eff = {lambda:.6} is not above 3"
        )));
    }
    if !(eps > 0.0 && eps < (lambda - 3.0) / 2.0) {
        return Err(Error::InvalidArgument("eps must lie in (0, (lambda - 3) / 2)".into()));
    }
    let pair = lemur_pair(xi, conv, LIOU_C)?;
    let x = libm::floor(libm::exp((lambda - 1.0 - eps) * ln_big(&conv.height)));
    if x < 2.0 {
        return Err(Error::InvalidArgument("height bound below 2".into()));
    }
    let v1 = pair.p.mul(&pair.p);
    let v2 = pair.p.mul(&pair.r);
    let ln_v1 = eval_certified(&v1, xi, LN_WIDTH)?.ln_abs;
    let ln_v2 = eval_certified(&v2, xi, LN_WIDTH)?.ln_abs;
    let lx = libm::log(x);
    let bound = 1.0 + (2.0 + eps) / (lambda - 1.0 - eps);
    let mut out = LiouCheck {
        w_witness: -ln_v1.1 / lx,
        pair,
        eps,
        x,
        v1,
        v2,
        ln_v1,
        ln_v2,
        w: None,
        w_sep: None,
        separable_poly: None,
        bound,
        slack: tol.slack(x),
        exhaustive: false,
        note: None,
    };
    match best_polys(2, x, xi, &[SearchClass::All, SearchClass::Separable], strategy, tol) {
        Ok(found) => {
            out.w = Some(found[0].exponent(x));
            out.w_sep = Some(found[1].exponent(x));
            out.separable_poly = Some(found[1].poly.clone());
            out.exhaustive = found[1].exact;
        }
        Err(e @ (Error::BudgetExceeded { .. } | Error::PrecisionCap { .. })) => {
            out.note = Some(alloc::format!("search not completed: {e}"));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// One irreducible factor of `P_X` in the certificate.
#[derive(Debug, Clone)]
pub struct FactorEntry {
    pub poly: IntPoly,
    pub degree: usize,
    pub multiplicity: u32,
    pub height: BigInt,
    /// `ln H_i / ln X`.
    pub beta: f64,
    /// `-ln |Q_i(xi)| / ln H_i`; undefined when `H_i = 1`.
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct KappaCertificate {
    pub n: usize,
    pub x: f64,
    pub record: BestApproxRecord,
    pub factors: Vec<FactorEntry>,
    /// `sum (alpha_i - 1) beta_i gamma_i + beta_i (d_i - 1)`.
    pub bound: f64,
    /// `sum alpha_i d_i`; never above `n`.
    pub degree_sum: usize,
    /// `sum alpha_i beta_i - 1`; at most `o(1)`.
    pub height_excess: f64,
    /// `bound <= degree_sum - 1`.
    pub criterion: bool,
    /// Some factor has height 1.
    pub unit_height_factor: bool,
}

impl KappaCertificate {
    pub fn slack(&self, tol: &Tolerances) -> f64 {
        tol.slack(self.x)
    }

    /// `kappa <= B + c / ln X`.
    pub fn bound_holds(&self, tol: &Tolerances) -> bool {
        self.record.kappa <= self.bound + self.slack(tol)
    }

    pub fn sides_hold(&self, tol: &Tolerances) -> bool {
        self.degree_sum <= self.n && self.height_excess <= self.slack(tol)
    }
}

pub fn kappa_certificate(
    n: usize,
    x: f64,
    xi: &CertifiedReal,
    strategy: Strategy,
    tol: &Tolerances,
) -> Result<KappaCertificate> {
    let record = local_exponents(n, x, xi, &[], strategy, tol)?;
    let lx = libm::log(x);
    let f = factor(&record.poly);
    let mut factors = Vec::new();
    for (q, m) in &f.factors {
        let height = q.height();
        let lh = ln_big(&height);
        let gamma = if height > BigInt::one() {
            Some(-eval_certified(q, xi, LN_WIDTH)?.ln_mid() / lh)
        } else {
            None
        };
        factors.push(FactorEntry {
            poly: q.clone(),
            degree: q.deg(),
            multiplicity: *m,
            beta: lh / lx,
            gamma,
            height,
        });
    }
    let bound = factors
        .iter()
        .map(|e| {
            let a = e.multiplicity as f64;
            (a - 1.0) * e.beta * e.gamma.unwrap_or(0.0) + e.beta * (e.degree as f64 - 1.0)
        })
        .sum::<f64>();
    let degree_sum = factors.iter().map(|e| e.multiplicity as usize * e.degree).sum();
    let height_excess = factors.iter().map(|e| e.multiplicity as f64 * e.beta).sum::<f64>() - 1.0;
    Ok(KappaCertificate {
        n,
        x,
        criterion: bound <= degree_sum as f64 - 1.0,
        unit_height_factor: factors.iter().any(|e| e.gamma.is_none()),
        record,
        factors,
        bound,
        degree_sum,
        height_excess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::{Growth, NumberSpec};

    fn liouville(lambda: f64, terms: Option<u32>) -> CertifiedReal {
        CertifiedReal::new(NumberSpec::liouville(2, Growth::Geometric(lambda), 1, terms)).unwrap()
    }

    #[test]
    fn liouville_principal_convergents_are_truncations() {
        let xi = liouville(4.0, None);
        let c = principal_convergents(&xi, 3, 2.0).unwrap();
        let qs: Vec<BigInt> = c.iter().map(|r| r.a.clone()).collect();
        assert_eq!(qs, [BigInt::from(2), BigInt::from(16), BigInt::from(65536)]);
        for r in &c {
            let l = r.lambda_eff.unwrap();
            assert!(l > 2.5 && l <= 3.0 + 1e-9, "{l}");
        }
    }

    #[test]
    fn golden_ratio_quality_tends_to_one() {
        let xi = CertifiedReal::new(NumberSpec::continued_fraction(alloc::vec![0], alloc::vec![1])).unwrap();
        let c = convergents(&xi, 30).unwrap();
        assert_eq!(c.len(), 30);
        let last = c.last().unwrap().lambda_eff.unwrap();
        assert!(last > 1.0 && last < 1.06, "{last}");
        assert!(last < c[10].lambda_eff.unwrap());
        assert_eq!(c[10].a, BigInt::from(89));
    }

    #[test]
    fn rational_expansion_terminates() {
        let xi = CertifiedReal::new(NumberSpec::rational(1, 3)).unwrap();
        let c = convergents(&xi, 10).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].poly, IntPoly::from_i64(&[0, 1]));
    }

    #[test]
    fn witness_beats_n_minus_one() {
        let xi = liouville(6.0, None);
        let c = principal_convergents(&xi, 2, 2.0).unwrap();
        let w = theorem_co_witness(2, 2, &c[1], &xi).unwrap();
        assert!(w.root_is_best);
        assert!(w.kappa_lower > 1.0, "{}", w.kappa_lower);
        assert!(w.kappa_lower >= w.asymptotic - Tolerances::default().slack(w.x.to_f64().unwrap()));
    }

    #[test]
    fn witness_refuses_weak_convergent() {
        let xi = liouville(4.0, None);
        let c = principal_convergents(&xi, 1, 2.0).unwrap();
        assert!(matches!(theorem_co_witness(2, 2, &c[0], &xi), Err(Error::InvalidArgument(_))));
        assert!(theorem_co_witness(2, 3, &c[0], &xi).is_err());
    }

    #[test]
    fn determinant_pair_bounds() {
        let xi = liouville(6.0, None);
        let c = principal_convergents(&xi, 2, 2.0).unwrap();
        let pair = lemur_pair(&xi, &c[1], 0.25).unwrap();
        assert!(pair.ratio.0 >= pair.determinant_lower - 1e-12, "{pair:?}");
        assert!(pair.determinant_lower >= 0.75);
        assert!(pair.ratio.1 <= pair.dirichlet_upper);
        assert!(lemur_pair(&xi, &c[1], 0.5).is_err());
    }

    #[test]
    fn single_factor_certificate() {
        let xi = CertifiedReal::new(NumberSpec::e_minus_2()).unwrap();
        let tol = Tolerances::default();
        let cert = kappa_certificate(2, 10.0, &xi, Strategy::Auto, &tol).unwrap();
        if cert.factors.len() == 1 && cert.factors[0].multiplicity == 1 {
            let e = &cert.factors[0];
            assert!((cert.bound - e.beta * (e.degree as f64 - 1.0)).abs() < 1e-12);
            assert!(cert.bound <= 1.0 + 1e-12);
        }
        assert!(cert.sides_hold(&tol));
    }
}

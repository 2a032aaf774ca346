use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::config::Tolerances;
use crate::dyadic::{floor_shr, DyadicInterval};
use crate::error::{Error, Result};
use crate::realnum::CertifiedReal;

#[derive(Debug, Clone)]
pub struct Simultaneous {
    pub q: u64,
    /// Enclosure of `max_j ||q xi^j||`.
    pub value: DyadicInterval,
    /// Bounds on its natural log; `-inf` when the value is exactly zero.
    pub ln_value: (f64, f64),
    /// `-ln(value) / ln Q`; undefined for `Q = 1`.
    pub lambda: Option<f64>,
    pub tie: bool,
}

/// Enclosure of the distance to the nearest integer.
fn nearest_int_dist(v: &DyadicInterval) -> DyadicInterval {
    let s = v.scale();
    let one = BigInt::from(1) << s;
    let k = floor_shr(&(v.lo() + v.hi() + &one), s + 1);
    let d = v.add_int(&-k).abs();
    let half = BigInt::from(1) << s.saturating_sub(1);
    if s >= 1 && d.hi() <= &half {
        return d;
    }
    let w = v.hi() - v.lo();
    let lo = (&half - w).max(BigInt::from(0));
    DyadicInterval::new(lo, half, s)
}

struct Powers {
    pows: Vec<DyadicInterval>,
}

impl Powers {
    fn new(xi: &CertifiedReal, n: usize, bits: u32) -> Result<Self> {
        let x = xi.interval(bits)?;
        let mut pows = Vec::with_capacity(n);
        let mut z = x.clone();
        for _ in 0..n {
            pows.push(z.clone());
            z = z.mul(&x).round_out(bits + 16);
        }
        Ok(Powers { pows })
    }

    fn value(&self, q: u64) -> DyadicInterval {
        let qb = BigInt::from(q);
        let mut m: Option<DyadicInterval> = None;
        for p in &self.pows {
            let d = nearest_int_dist(&p.mul_int(&qb));
            m = Some(match m {
                None => d,
                Some(m) => m.max(&d),
            });
        }
        m.expect("n >= 1")
    }
}

fn frac_dist(v: f64) -> f64 {
    libm::fabs(v - libm::round(v))
}

/// The `q` in `1..=Q` minimizing `max_{1<=j<=n} ||q xi^j||`; ties go to the
/// smallest `q`.
pub fn best_simultaneous(n: usize, big_q: u64, xi: &CertifiedReal, tol: &Tolerances) -> Result<Simultaneous> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree bound must be at least 1".into()));
    }
    if big_q == 0 || big_q > tol.enum_budget {
        return Err(Error::BudgetExceeded { budget: tol.enum_budget });
    }
    let pf: Vec<f64> = {
        let x = xi.approx();
        (1..=n).map(|j| libm::pow(x, j as f64)).collect()
    };
    let screen_err = |q: u64| -> f64 {
        pf.iter().map(|p| libm::fabs(*p)).fold(0.0, f64::max) * q as f64 * 1e-13 + 1e-15
    };
    let mut approx: Vec<(u64, f64)> = Vec::with_capacity(big_q as usize);
    let mut best = f64::INFINITY;
    for q in 1..=big_q {
        let m = pf.iter().map(|p| frac_dist(q as f64 * p)).fold(0.0, f64::max);
        best = best.min(m + screen_err(q));
        approx.push((q, m));
    }
    let margin = screen_err(big_q);
    let short: Vec<u64> = approx
        .iter()
        .filter(|(_, m)| *m <= best + margin)
        .map(|(q, _)| *q)
        .collect();

    let mut bits = 256u32.min(xi.max_bits());
    loop {
        let pw = Powers::new(xi, n, bits)?;
        let vals: Vec<(u64, DyadicInterval)> = short.iter().map(|&q| (q, pw.value(q))).collect();
        let mut win = 0usize;
        for (i, (_, v)) in vals.iter().enumerate() {
            if v.certainly_lt(&vals[win].1) {
                win = i;
            }
        }
        // every rival must be certainly larger, or we refine
        let undecided = vals
            .iter()
            .enumerate()
            .any(|(i, (_, v))| i != win && !vals[win].1.certainly_lt(v));
        if !undecided || bits >= xi.max_bits() {
            // the winner is the smallest q not certainly above the others
            let mut idx = win;
            if undecided {
                for (i, (_, v)) in vals.iter().enumerate() {
                    if !vals[win].1.certainly_lt(v) && vals[i].0 < vals[idx].0 {
                        idx = i;
                    }
                }
            }
            let (q, v) = vals[idx].clone();
            let ln_value = if v.lo().sign() == num_bigint::Sign::NoSign && v.hi().sign() == num_bigint::Sign::NoSign {
                (f64::NEG_INFINITY, f64::NEG_INFINITY)
            } else if v.contains_zero() {
                (f64::NEG_INFINITY, libm::log(v.hi_f64()))
            } else {
                v.ln_abs().expect("nonzero interval")
            };
            let lambda = if big_q >= 2 {
                Some(-0.5 * (ln_value.0 + ln_value.1) / libm::log(big_q as f64))
            } else {
                None
            };
            let lambda = lambda.map(|l| if l.is_nan() { f64::INFINITY } else { l });
            return Ok(Simultaneous {
                q,
                value: v,
                ln_value,
                lambda,
                tie: undecided,
            });
        }
        bits = (bits * 2).min(xi.max_bits());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::NumberSpec;

    fn e2() -> CertifiedReal {
        CertifiedReal::new(NumberSpec::e_minus_2()).unwrap()
    }

    #[test]
    fn linear_case_matches_brute_force() {
        let s = best_simultaneous(1, 3, &e2(), &Tolerances::default()).unwrap();
        assert_eq!(s.q, 3);
        assert!((s.value.mid_f64() - 0.154845485377).abs() < 1e-9);
        let one = best_simultaneous(1, 1, &e2(), &Tolerances::default()).unwrap();
        assert_eq!(one.q, 1);
        assert!(one.lambda.is_none());
        assert!((one.value.mid_f64() - 0.281718171541).abs() < 1e-9);
    }

    #[test]
    fn quadratic_case_matches_brute_force() {
        let x = core::f64::consts::E - 2.0;
        let mut best = (0, f64::INFINITY);
        for q in 1..=10u64 {
            let m = frac_dist(q as f64 * x).max(frac_dist(q as f64 * x * x));
            if m < best.1 {
                best = (q, m);
            }
        }
        let s = best_simultaneous(2, 10, &e2(), &Tolerances::default()).unwrap();
        assert_eq!(s.q, best.0);
        assert!((s.value.mid_f64() - best.1).abs() < 1e-12, "{} {} {:?}", s.value.mid_f64(), s.q, best);
    }

    #[test]
    fn rational_target_has_infinite_lambda() {
        let xi = CertifiedReal::new(NumberSpec::rational(1, 4)).unwrap();
        let s = best_simultaneous(2, 20, &xi, &Tolerances::default()).unwrap();
        assert_eq!(s.q, 16);
        assert_eq!(s.lambda, Some(f64::INFINITY));
    }
}

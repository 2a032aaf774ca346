use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{canonical_cmp, height_bound, sort_cands, ClassMemo, SearchClass, SearchContext, Strategy};
use crate::bounds::{derivative_factor, second_derivative_factor};
use crate::config::Tolerances;
use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::intpoly::{factor, real_roots_squarefree, IntPoly, RootBox};
use crate::realnum::CertifiedReal;

/// `H(alpha) |xi - alpha|` as a certified interval.
#[derive(Debug, Clone)]
pub struct Objective {
    pub interval: DyadicInterval,
    pub ln: (f64, f64),
    /// Exact value when both the target and the root are rational.
    pub exact: Option<BigRational>,
}

impl Objective {
    pub fn ln_mid(&self) -> f64 {
        0.5 * (self.ln.0 + self.ln.1)
    }

    pub fn upper(&self) -> f64 {
        libm::exp(self.ln.1)
    }
}

fn objective_at(height: &BigInt, root: &RootBox, xi: &CertifiedReal, bits: u32) -> Result<(RootBox, DyadicInterval)> {
    let r = root.refine(bits);
    let x = xi.interval(bits)?;
    Ok((r.clone(), x.sub(&r.interval).abs().mul_int(height)))
}

fn rational_root(root: &RootBox) -> Option<BigRational> {
    let c = root.poly.coeffs();
    (root.poly.deg() == 1).then(|| BigRational::new(-c[0].clone(), c[1].clone()))
}

fn exact_objective(height: &BigInt, root: &RootBox, xi: &CertifiedReal) -> Option<BigRational> {
    let v = (xi.exact_rational()? - rational_root(root)?).abs();
    Some(v * BigRational::from_integer(height.clone()))
}

/// A quadratic target equals the one root of its minimal polynomial whose
/// box it meets once the two boxes are disjoint.
fn is_target_itself(root: &RootBox, xi: &CertifiedReal) -> Result<bool> {
    let Some(m) = xi.quadratic() else { return Ok(false) };
    if root.poly != *m && root.poly != m.neg() {
        return Ok(false);
    }
    let x = xi.interval(128.min(xi.max_bits()))?;
    let r = root.refine(128);
    Ok(r.interval.intersects(&x)
        && real_roots_squarefree(m)
            .iter()
            .map(|o| o.refine(128))
            .filter(|o| o.interval.intersects(&x))
            .count()
            == 1)
}

pub fn certify_objective(height: &BigInt, root: &RootBox, xi: &CertifiedReal) -> Result<Objective> {
    if let Some(v) = exact_objective(height, root, xi) {
        if v.is_zero() {
            return Err(Error::PossibleRoot { degree: 1 });
        }
        let interval = DyadicInterval::from_ratio_bounds(&v, &v, 128);
        let ln = interval
            .ln_abs()
            .ok_or_else(|| Error::Internal("nonzero objective rounded to zero".into()))?;
        return Ok(Objective {
            interval,
            ln,
            exact: Some(v),
        });
    }
    if is_target_itself(root, xi)? {
        return Err(Error::PossibleRoot { degree: root.poly.deg() });
    }
    let mut bits = 96u32;
    loop {
        let b = bits.min(xi.max_bits());
        let (_, iv) = objective_at(height, root, xi, b)?;
        if let Some((l, h)) = iv.ln_abs() {
            if h - l <= 1e-12 {
                return Ok(Objective {
                    interval: iv,
                    ln: (l, h),
                    exact: None,
                });
            }
        }
        if b >= xi.max_bits() {
            return Err(if iv.contains_zero() {
                Error::PossibleRoot { degree: root.poly.deg() }
            } else {
                Error::PrecisionCap { cap: xi.max_bits() }
            });
        }
        bits = b * 2;
    }
}

#[derive(Debug, Clone)]
pub struct BestAlg {
    /// Minimal polynomial: primitive, irreducible, positive leading coefficient.
    pub minpoly: IntPoly,
    pub root: RootBox,
    pub objective: Objective,
    pub exact: bool,
    pub tie: bool,
}

impl BestAlg {
    /// `-ln(H(alpha) |xi - alpha|) / ln X`.
    pub fn exponent(&self, x: f64) -> f64 {
        -self.objective.ln_mid() / libm::log(x)
    }

    pub fn height(&self) -> BigInt {
        self.minpoly.height()
    }
}

struct Entry {
    key: Vec<i64>,
    poly: IntPoly,
    root: RootBox,
    obj: Objective,
    tie: bool,
}

fn compare_objectives(a: &Entry, b: &Entry, xi: &CertifiedReal) -> Result<Option<Ordering>> {
    if let (Some(x), Some(y)) = (&a.obj.exact, &b.obj.exact) {
        return Ok(match x.cmp(y) {
            Ordering::Equal => None,
            o => Some(o),
        });
    }
    if a.obj.interval.certainly_lt(&b.obj.interval) {
        return Ok(Some(Ordering::Less));
    }
    if b.obj.interval.certainly_lt(&a.obj.interval) {
        return Ok(Some(Ordering::Greater));
    }
    let (ha, hb) = (a.poly.height(), b.poly.height());
    let mut bits = 256u32;
    while bits < xi.max_bits() {
        bits = (bits * 2).min(xi.max_bits());
        let (_, x) = objective_at(&ha, &a.root, xi, bits)?;
        let (_, y) = objective_at(&hb, &b.root, xi, bits)?;
        if x.certainly_lt(&y) {
            return Ok(Some(Ordering::Less));
        }
        if y.certainly_lt(&x) {
            return Ok(Some(Ordering::Greater));
        }
    }
    Ok(None)
}

fn offer(best: &mut Option<Entry>, e: Entry, xi: &CertifiedReal) -> Result<()> {
    let Some(b) = best.as_mut() else {
        *best = Some(e);
        return Ok(());
    };
    if b.key == e.key && b.root.interval.intersects(&e.root.interval) {
        return Ok(());
    }
    match compare_objectives(&e, b, xi)? {
        Some(Ordering::Less) => *best = Some(e),
        Some(_) => {}
        None => {
            let tie_first = canonical_cmp(&e.key, &b.key) == Ordering::Less
                || (e.key == b.key && e.root.interval.certainly_lt(&b.root.interval));
            if tie_first {
                *best = Some(Entry { tie: true, ..e });
            } else {
                b.tie = true;
            }
        }
    }
    Ok(())
}

/// Best real root of an irreducible `q`, ignoring roots farther than `limit`.
fn best_root_of(q: &IntPoly, xi: &CertifiedReal, limit: f64, best: &mut Option<Entry>) -> Result<()> {
    let key = match q.to_i64() {
        Some(k) => k,
        None => return Ok(()),
    };
    let h = q.height();
    let x = xi.approx();
    let tol = 1e-15 * (1.0 + libm::fabs(x));
    for root in real_roots_squarefree(q) {
        let r = root.refine(64);
        if libm::fabs(r.approx() - x) > limit * (1.0 + 1e-6) + tol {
            continue;
        }
        let obj = certify_objective(&h, &r, xi)?;
        offer(
            best,
            Entry {
                key: key.clone(),
                poly: q.clone(),
                root: r,
                obj,
                tie: false,
            },
            xi,
        )?;
    }
    Ok(())
}

/// Real algebraic `alpha` of degree `<= n` and height `<= X` minimizing
/// `H(alpha) |xi - alpha|`. `seeds` are polynomials whose irreducible factors
/// give starting upper bounds.
pub fn best_alg(
    n: usize,
    x: f64,
    xi: &CertifiedReal,
    strategy: Strategy,
    tol: &Tolerances,
    seeds: &[IntPoly],
) -> Result<BestAlg> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree bound must be at least 1".into()));
    }
    let h = height_bound(x)?;
    let hb = BigInt::from(h);
    let mut pool: Vec<IntPoly> = Vec::new();
    for s in seeds {
        if s.deg() == 0 {
            continue;
        }
        for (q, _) in factor(s).factors {
            if q.deg() <= n && q.height() <= hb {
                pool.push(q);
            }
        }
    }
    let m = libm::round(xi.approx()).clamp(-(h as f64), h as f64) as i64;
    pool.push(IntPoly::from_i64(&[-m, 1]));
    let lin_strategy = if strategy == Strategy::Heuristic { Strategy::Heuristic } else { Strategy::Auto };
    let lin = super::best_poly(1, x, xi, SearchClass::Irreducible, lin_strategy, tol)?;
    pool.push(lin.poly.primitive_part());
    pool.sort();
    pool.dedup();

    let mut best: Option<Entry> = None;
    for q in &pool {
        best_root_of(q, xi, f64::INFINITY, &mut best)?;
    }

    let ctx = SearchContext::new(xi, n, h, 256)?;
    let v0 = best
        .as_ref()
        .map(|b| b.obj.upper())
        .ok_or_else(|| Error::NoCandidate("no real algebraic seed".into()))?;
    let xa = libm::fabs(ctx.xi_f64);
    let tau = v0 * derivative_factor(n, xa + v0) * (1.0 + 1e-9) + 1e-300;
    let ctx = ctx.upgrade_for(tau)?;
    let mut cands = super::generate(&ctx, strategy, tau, tol.enum_budget)?;
    sort_cands(&mut cands);
    let guess = |a: &[i64], v: f64| -> f64 {
        let d = libm::fabs(ctx.deriv_f64(a)).max(1e-300);
        let ha = a.iter().map(|c| c.abs()).max().unwrap_or(1) as f64;
        libm::fabs(v) / d * ha
    };
    cands.sort_by(|a, b| {
        guess(&a.coeffs, a.approx)
            .partial_cmp(&guess(&b.coeffs, b.approx))
            .unwrap_or(Ordering::Equal)
    });
    let mut memo = ClassMemo::new();
    for c in &cands {
        if c.coeffs.len() < 2 {
            continue;
        }
        let g = c.coeffs.iter().fold(0i64, |g, &v| g.gcd(&v));
        if g != 1 {
            continue;
        }
        let ha = c.coeffs.iter().map(|v| v.abs()).max().unwrap() as f64;
        let v = best.as_ref().map(|b| b.obj.upper()).unwrap_or(v0);
        let r = v / ha;
        let k2 = ha * second_derivative_factor(n, xa + r);
        let lp = libm::fabs(ctx.deriv_f64(&c.coeffs));
        let lp_err = ha * derivative_factor(n, xa + 1.0) * 1e-12 + ctx.max_err() * n as f64;
        if libm::fabs(c.approx) - c.err > r * (lp + lp_err + r * k2) * (1.0 + 1e-9) {
            continue;
        }
        if !memo.admits(SearchClass::Irreducible, &c.coeffs) {
            continue;
        }
        best_root_of(&IntPoly::from_i64(&c.coeffs), xi, r, &mut best)?;
    }
    let b = best.ok_or_else(|| Error::NoCandidate("no real algebraic number".into()))?;
    Ok(BestAlg {
        minpoly: b.poly,
        root: b.root,
        objective: b.obj,
        exact: strategy.is_exact(),
        tie: b.tie,
    })
}

//! Best approximations at a fixed height bound.
//!
//! * [`best_polys`]: the polynomial `P` of degree `<= n`, height `<= H`,
//!   minimizing `|P(xi)|`, optionally within a class.
//! * [`best_alg`]: the real algebraic `alpha` minimizing `H(alpha) |xi - alpha|`.
//! * [`best_simultaneous`]: the `q <= Q` minimizing `max_j ||q xi^j||`.
//!
//! Exact strategies enumerate a superset of the candidates that could win and
//! decide the argmin on certified enclosures.

mod algebraic;
mod generate;
mod simultaneous;

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::config::Tolerances;
use crate::dyadic::{floor_shr, DyadicInterval};
use crate::error::{Error, Result};
use crate::intpoly::{eval_certified, CertifiedValue, IntPoly};
use crate::realnum::CertifiedReal;

pub use algebraic::{best_alg, certify_objective, BestAlg, Objective};
pub use simultaneous::{best_simultaneous, Simultaneous};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SearchClass {
    All,
    Separable,
    Irreducible,
}

impl SearchClass {
    pub const ALL: [SearchClass; 3] = [SearchClass::All, SearchClass::Separable, SearchClass::Irreducible];

    pub fn admits(&self, p: &IntPoly) -> bool {
        match self {
            SearchClass::All => !p.is_zero(),
            SearchClass::Separable => p.is_separable(),
            SearchClass::Irreducible => p.is_irreducible(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SearchClass::All => "all",
            SearchClass::Separable => "separable",
            SearchClass::Irreducible => "irreducible",
        }
    }
}

impl fmt::Display for SearchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SearchClass::All),
            "separable" | "sep" => Ok(SearchClass::Separable),
            "irreducible" | "irr" => Ok(SearchClass::Irreducible),
            _ => Err(Error::InvalidArgument("unknown class '".to_string() + s + "'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Offset sweep for small boxes, lattice slab enumeration otherwise.
    Auto,
    /// Every coefficient vector of the box.
    FullSweep,
    /// Sweep all but the constant coefficient.
    OffsetSweep,
    /// Reduced-lattice enumeration of the slab `|P(xi)| <= tau`.
    Lattice,
    /// Short vectors of reduced lattices only; not exact.
    Heuristic,
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "full" | "full-sweep" => Ok(Strategy::FullSweep),
            "offset" | "offset-sweep" => Ok(Strategy::OffsetSweep),
            "lattice" => Ok(Strategy::Lattice),
            "heuristic" => Ok(Strategy::Heuristic),
            _ => Err(Error::InvalidArgument("unknown strategy '".to_string() + s + "'")),
        }
    }
}

impl Strategy {
    pub fn is_exact(&self) -> bool {
        *self != Strategy::Heuristic
    }

    fn resolve(self, n: usize, h: i64) -> Strategy {
        match self {
            Strategy::Auto => {
                let box_size = libm::pow((2 * h + 1) as f64, n as f64);
                if box_size <= 2.0e5 {
                    Strategy::OffsetSweep
                } else {
                    Strategy::Lattice
                }
            }
            s => s,
        }
    }
}

/// A screened coefficient vector: `approx` is `L(a)` with `|L(a) - approx| <= err`.
#[derive(Debug, Clone)]
pub(crate) struct Cand {
    pub coeffs: Vec<i64>,
    pub approx: f64,
    pub err: f64,
}

/// Fixed-point powers of the target, `pows[i] / 2^scale ≈ xi^i`.
pub(crate) struct SearchContext<'a> {
    pub xi: &'a CertifiedReal,
    pub degree: usize,
    pub height: i64,
    pub scale: u32,
    pub pows: Vec<BigInt>,
    pub pows_f64: Vec<f64>,
    pub pow_err: Vec<f64>,
    pub xi_f64: f64,
}

const EPS: f64 = f64::EPSILON;

impl<'a> SearchContext<'a> {
    pub fn new(xi: &'a CertifiedReal, degree: usize, height: i64, scale: u32) -> Result<Self> {
        let work = scale + 64;
        let x = xi.interval(work.min(xi.max_bits()))?;
        let mut z = DyadicInterval::from_int(&BigInt::from(1));
        let mut pows = Vec::with_capacity(degree + 1);
        let mut pows_f64 = Vec::with_capacity(degree + 1);
        let mut pow_err = Vec::with_capacity(degree + 1);
        for _ in 0..=degree {
            let s = z.scale();
            let mid2 = z.lo() + z.hi();
            let p = if s + 1 >= scale {
                floor_shr(&mid2, s + 1 - scale)
            } else {
                mid2 << (scale - s - 1)
            };
            let w = if z.is_point() {
                0.0
            } else {
                libm::exp2(libm::ceil(z.width_log2()) + 1.0)
            };
            pow_err.push(w + libm::ldexp(1.0, -(scale as i32)));
            pows_f64.push(crate::dyadic::scaled_to_f64(&p, scale));
            pows.push(p);
            z = z.mul(&x).round_out(work + 8);
        }
        Ok(SearchContext {
            xi,
            degree,
            height,
            scale,
            pows,
            pows_f64,
            pow_err,
            xi_f64: xi.approx(),
        })
    }

    pub fn form_f64(&self, a: &[i64]) -> f64 {
        a.iter().zip(&self.pows_f64).map(|(&c, p)| c as f64 * p).sum()
    }

    pub fn deriv_f64(&self, a: &[i64]) -> f64 {
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as i64 * c) as f64 * self.pows_f64[i - 1])
            .sum()
    }

    /// Bound on `|form_f64(a) - L(a)|`.
    pub fn f64_err(&self, a: &[i64]) -> f64 {
        let k = (self.degree + 3) as f64 * EPS;
        a.iter()
            .zip(self.pows_f64.iter().zip(&self.pow_err))
            .map(|(&c, (p, e))| libm::fabs(c as f64) * (e + k * libm::fabs(*p)))
            .sum::<f64>()
            * (1.0 + 1e-9)
    }

    pub fn max_err(&self) -> f64 {
        let e = self.pow_err.iter().cloned().fold(0.0, f64::max);
        (self.degree + 1) as f64 * self.height as f64 * e * 2.0 + 1e-300
    }

    pub fn candidate(&self, a: &[i64]) -> Cand {
        let mut coeffs = a.to_vec();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let s: BigInt = coeffs
            .iter()
            .zip(&self.pows)
            .map(|(&c, p)| p * BigInt::from(c))
            .sum();
        let approx = crate::dyadic::scaled_to_f64(&s, self.scale);
        let err = coeffs
            .iter()
            .zip(&self.pow_err)
            .map(|(&c, e)| libm::fabs(c as f64) * e)
            .sum::<f64>()
            * (1.0 + 1e-9)
            + libm::fabs(approx) * 4.0 * EPS;
        Cand { coeffs, approx, err }
    }

    fn upgrade_for(self, tau: f64) -> Result<Self> {
        if tau < 1e-290 {
            return Err(Error::Internal("slab width below the floating-point screening range".into()));
        }
        let need = -libm::log2(tau.max(f64::MIN_POSITIVE))
            + libm::log2(((self.degree + 1) as f64) * self.height as f64)
            + 80.0;
        if (self.scale as f64) >= need {
            return Ok(self);
        }
        let bits = (need as u32).next_power_of_two().max(self.scale * 2);
        if bits > self.xi.max_bits() {
            return Err(Error::PrecisionCap { cap: self.xi.max_bits() });
        }
        SearchContext::new(self.xi, self.degree, self.height, bits)
    }
}

pub(crate) struct ClassMemo {
    memo: BTreeMap<(SearchClass, Vec<i64>), bool>,
}

impl ClassMemo {
    pub fn new() -> Self {
        ClassMemo { memo: BTreeMap::new() }
    }

    pub fn admits(&mut self, class: SearchClass, a: &[i64]) -> bool {
        if class == SearchClass::All {
            return a.iter().any(|&c| c != 0);
        }
        *self
            .memo
            .entry((class, a.to_vec()))
            .or_insert_with(|| class.admits(&IntPoly::from_i64(a)))
    }
}

/// Order used to break certified ties: degree, then coefficients.
pub(crate) fn canonical_cmp(a: &[i64], b: &[i64]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone)]
pub struct BestPoly {
    pub poly: IntPoly,
    pub value: CertifiedValue,
    pub class: SearchClass,
    /// False when produced by the heuristic strategy.
    pub exact: bool,
    /// Another admissible polynomial could not be separated from this one.
    pub tie: bool,
}

impl BestPoly {
    /// `-ln |P(xi)| / ln X`.
    pub fn exponent(&self, x: f64) -> f64 {
        -self.value.ln_mid() / libm::log(x)
    }

    pub fn abs_value(&self) -> f64 {
        self.value.abs_interval().mid_f64()
    }
}

fn abs_at(p: &IntPoly, xi: &CertifiedReal, prec: u32) -> Result<DyadicInterval> {
    let hb = p.height().bits() as u32;
    Ok(p.eval_interval(&xi.interval(prec)?, prec + 16 + hb).abs())
}

/// Decide `|a(xi)| < |b(xi)|`; `None` means indistinguishable at the cap.
pub(crate) fn compare_values(
    a: &IntPoly,
    va: &DyadicInterval,
    b: &IntPoly,
    vb: &DyadicInterval,
    xi: &CertifiedReal,
) -> Result<Option<Ordering>> {
    if va.certainly_lt(vb) {
        return Ok(Some(Ordering::Less));
    }
    if vb.certainly_lt(va) {
        return Ok(Some(Ordering::Greater));
    }
    let mut prec = 256u32;
    while prec < xi.max_bits() {
        prec = (prec * 2).min(xi.max_bits());
        let (x, y) = (abs_at(a, xi, prec)?, abs_at(b, xi, prec)?);
        if x.certainly_lt(&y) {
            return Ok(Some(Ordering::Less));
        }
        if y.certainly_lt(&x) {
            return Ok(Some(Ordering::Greater));
        }
    }
    Ok(None)
}

struct Pick {
    coeffs: Vec<i64>,
    poly: IntPoly,
    value: CertifiedValue,
    tie: bool,
}

fn select(
    ctx: &SearchContext,
    cands: &[Cand],
    class: SearchClass,
    memo: &mut ClassMemo,
) -> Result<Option<Pick>> {
    let err_max = cands.iter().map(|c| c.err).fold(0.0, f64::max);
    let mut best: Option<Pick> = None;
    for c in cands {
        if let Some(b) = &best {
            if libm::fabs(c.approx) - err_max > b.value.abs_interval().hi_f64() * (1.0 + 1e-12) {
                break;
            }
        }
        if !memo.admits(class, &c.coeffs) {
            continue;
        }
        let p = IntPoly::from_i64(&c.coeffs);
        let v = eval_certified(&p, ctx.xi, 1e-12)?;
        best = Some(match best {
            None => Pick {
                coeffs: c.coeffs.clone(),
                poly: p,
                value: v,
                tie: false,
            },
            Some(b) => {
                match compare_values(&p, &v.abs_interval(), &b.poly, &b.value.abs_interval(), ctx.xi)? {
                    Some(Ordering::Less) => Pick {
                        coeffs: c.coeffs.clone(),
                        poly: p,
                        value: v,
                        tie: false,
                    },
                    Some(_) => b,
                    None => {
                        if canonical_cmp(&c.coeffs, &b.coeffs) == Ordering::Less {
                            Pick {
                                coeffs: c.coeffs.clone(),
                                poly: p,
                                value: v,
                                tie: true,
                            }
                        } else {
                            Pick { tie: true, ..b }
                        }
                    }
                }
            }
        });
    }
    Ok(best)
}

fn sort_cands(c: &mut Vec<Cand>) {
    c.sort_by(|a, b| {
        libm::fabs(a.approx)
            .partial_cmp(&libm::fabs(b.approx))
            .unwrap_or(Ordering::Equal)
            .then_with(|| canonical_cmp(&a.coeffs, &b.coeffs))
    });
    c.dedup_by(|a, b| a.coeffs == b.coeffs);
}

pub(crate) fn height_bound(x: f64) -> Result<i64> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::InvalidArgument("height bound X must be a finite number >= 1".into()));
    }
    if x > 1e15 {
        return Err(Error::InvalidArgument("height bound X is too large for exhaustive search".into()));
    }
    Ok(libm::floor(x) as i64)
}

pub(crate) fn generate(ctx: &SearchContext, strategy: Strategy, tau: f64, budget: u64) -> Result<Vec<Cand>> {
    match strategy.resolve(ctx.degree, ctx.height) {
        Strategy::FullSweep => generate::full_sweep(ctx, tau, budget),
        Strategy::OffsetSweep => generate::offset_sweep(ctx, tau, budget),
        Strategy::Lattice => generate::lattice_slab(ctx, tau, budget),
        Strategy::Heuristic => generate::heuristic(ctx),
        Strategy::Auto => unreachable!(),
    }
}

/// Best polynomials for several classes at once, sharing the enumeration.
/// Results are returned in the order of `classes`.
pub fn best_polys(
    n: usize,
    x: f64,
    xi: &CertifiedReal,
    classes: &[SearchClass],
    strategy: Strategy,
    tol: &Tolerances,
) -> Result<Vec<BestPoly>> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree bound must be at least 1".into()));
    }
    let h = height_bound(x)?;
    let mut ctx = SearchContext::new(xi, n, h, 256)?;
    let mut memo = ClassMemo::new();
    let mut known = generate::heuristic(&ctx)?;
    sort_cands(&mut known);

    if strategy == Strategy::Heuristic {
        let mut out = Vec::new();
        for &class in classes {
            let pick = select(&ctx, &known, class, &mut memo)?
                .ok_or_else(|| Error::NoCandidate(class.name().into()))?;
            out.push(BestPoly {
                poly: pick.poly,
                value: pick.value,
                class,
                exact: false,
                tie: pick.tie,
            });
        }
        return Ok(out);
    }

    let mut found: BTreeMap<SearchClass, Pick> = BTreeMap::new();
    let max_tau = (n + 1) as f64 * h as f64 * libm::pow(libm::fabs(ctx.xi_f64).max(1.0), n as f64) * 4.0 + 4.0;
    let mut tau: f64 = 0.0;
    for _round in 0..64 {
        let pending: Vec<SearchClass> = classes.iter().copied().filter(|c| !found.contains_key(c)).collect();
        if pending.is_empty() {
            break;
        }
        // the smallest known admissible value of each pending class must fall inside the slab
        let mut next = tau;
        for &class in &pending {
            let t = known
                .iter()
                .find(|c| memo.admits(class, &c.coeffs))
                .map(|c| (libm::fabs(c.approx) + c.err) * (1.0 + 1e-9));
            next = next.max(t.unwrap_or(if tau > 0.0 { tau * 16.0 } else { 1.0 }));
        }
        if next <= tau {
            next = tau * 16.0;
        }
        if next > max_tau * 16.0 {
            return Err(Error::NoCandidate(pending[0].name().into()));
        }
        tau = next;
        ctx = ctx.upgrade_for(tau)?;
        let mut cands = generate(&ctx, strategy, tau, tol.enum_budget)?;
        sort_cands(&mut cands);
        for &class in &pending {
            if let Some(pick) = select(&ctx, &cands, class, &mut memo)? {
                if pick.value.abs_interval().hi_f64() <= tau * (1.0 - 1e-12) {
                    found.insert(class, pick);
                }
            }
        }
        known.extend(cands);
        sort_cands(&mut known);
    }
    classes
        .iter()
        .map(|&class| {
            let pick = found
                .get(&class)
                .ok_or_else(|| Error::NoCandidate(class.name().into()))?;
            Ok(BestPoly {
                poly: pick.poly.clone(),
                value: pick.value.clone(),
                class,
                exact: true,
                tie: pick.tie,
            })
        })
        .collect()
}

pub fn best_poly(
    n: usize,
    x: f64,
    xi: &CertifiedReal,
    class: SearchClass,
    strategy: Strategy,
    tol: &Tolerances,
) -> Result<BestPoly> {
    Ok(best_polys(n, x, xi, &[class], strategy, tol)?.remove(0))
}

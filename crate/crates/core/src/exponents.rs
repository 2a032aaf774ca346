//! Local exponents at a single height bound, scans over geometric grids and
//! trailing-window limit estimates.

use alloc::vec;
use alloc::vec::Vec;

use crate::bestapprox::{best_alg, best_polys, best_simultaneous, SearchClass, Strategy};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::intpoly::{real_roots_squarefree, IntPoly};
use crate::realnum::{CertifiedReal, NumberSpec};

#[derive(Debug, Clone)]
pub struct BestApproxRecord {
    pub n: usize,
    pub x: f64,
    pub poly: IntPoly,
    /// Bounds on `ln |P_X(xi)|`.
    pub ln_value: (f64, f64),
    pub w: f64,
    pub alpha_minpoly: IntPoly,
    /// Position of the root among the real roots of `alpha_minpoly`, increasing.
    pub alpha_root_index: usize,
    pub alpha_approx: f64,
    /// Bounds on `ln(H(alpha) |xi - alpha|)`.
    pub ln_objective: (f64, f64),
    pub wstar: f64,
    pub kappa: f64,
    pub separable: bool,
    pub w_sep: Option<f64>,
    pub w_irr: Option<f64>,
    pub lambda_local: Option<f64>,
    pub exact: bool,
    /// Some minimum was attained by two candidates that could not be separated.
    pub tie: bool,
}

fn mid(b: (f64, f64)) -> f64 {
    0.5 * (b.0 + b.1)
}

/// All exponents at `(n, X)`. `classes` selects which restricted exponents
/// are computed besides the unrestricted one.
pub fn local_exponents(
    n: usize,
    x: f64,
    xi: &CertifiedReal,
    classes: &[SearchClass],
    strategy: Strategy,
    tol: &Tolerances,
) -> Result<BestApproxRecord> {
    if !(x >= 2.0) {
        return Err(Error::InvalidArgument("local exponents need X >= 2".into()));
    }
    let mut wanted = vec![SearchClass::All];
    for c in classes {
        if !wanted.contains(c) {
            wanted.push(*c);
        }
    }
    let found = best_polys(n, x, xi, &wanted, strategy, tol)?;
    let lx = libm::log(x);
    let all = &found[0];
    let exp_of = |class: SearchClass| -> Option<f64> {
        wanted
            .iter()
            .position(|&c| c == class)
            .map(|i| found[i].exponent(x))
    };
    let seeds: Vec<IntPoly> = found.iter().map(|b| b.poly.clone()).collect();
    let alg = best_alg(n, x, xi, strategy, tol, &seeds)?;
    let roots = real_roots_squarefree(&alg.minpoly);
    let alpha_root_index = roots
        .iter()
        .position(|r| r.interval.intersects(&alg.root.interval))
        .ok_or_else(|| Error::Internal("best root lost during isolation".into()))?;
    let lambda_local = if x >= 2.0 {
        best_simultaneous(n, libm::floor(x) as u64, xi, tol)?.lambda
    } else {
        None
    };
    let ln_value = all.value.ln_abs;
    let ln_objective = alg.objective.ln;
    let w = -mid(ln_value) / lx;
    let wstar = -mid(ln_objective) / lx;
    Ok(BestApproxRecord {
        n,
        x,
        poly: all.poly.clone(),
        ln_value,
        w,
        alpha_minpoly: alg.minpoly.clone(),
        alpha_root_index,
        alpha_approx: alg.root.approx(),
        ln_objective,
        wstar,
        kappa: w - wstar,
        separable: all.poly.is_separable(),
        w_sep: exp_of(SearchClass::Separable),
        w_irr: exp_of(SearchClass::Irreducible),
        lambda_local,
        exact: all.exact && alg.exact,
        tie: found.iter().any(|b| b.tie) || alg.tie,
    })
}

/// `start * ratio^j` up to `end`, inclusive up to rounding.
pub fn geometric_grid(start: f64, end: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(start >= 2.0 && end > start && ratio > 1.0 && end.is_finite()) {
        return Err(Error::InvalidArgument("grid needs 2 <= start < end and ratio > 1".into()));
    }
    let mut out = Vec::new();
    let mut j = 0i32;
    loop {
        let x = start * libm::pow(ratio, j as f64);
        if x > end * (1.0 + 1e-12) {
            break;
        }
        out.push(x);
        j += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub x: f64,
    pub record: Result<BestApproxRecord>,
}

#[derive(Debug, Clone)]
pub struct ScanSeries {
    pub spec: NumberSpec,
    pub n: usize,
    pub rows: Vec<ScanRow>,
}

impl ScanSeries {
    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.x).collect()
    }

    pub fn records(&self) -> impl Iterator<Item = &BestApproxRecord> {
        self.rows.iter().filter_map(|r| r.record.as_ref().ok())
    }
}

/// Records on a geometric grid. A failing grid point keeps its error in the
/// row and the scan moves on.
#[allow(clippy::too_many_arguments)]
pub fn scan(
    xi: &CertifiedReal,
    n: usize,
    x_start: f64,
    x_end: f64,
    ratio: f64,
    classes: &[SearchClass],
    strategy: Strategy,
    tol: &Tolerances,
) -> Result<ScanSeries> {
    let grid = geometric_grid(x_start, x_end, ratio)?;
    let rows = grid
        .into_iter()
        .map(|x| ScanRow {
            x,
            record: local_exponents(n, x, xi, classes, strategy, tol),
        })
        .collect();
    Ok(ScanSeries {
        spec: xi.spec().clone(),
        n,
        rows,
    })
}

/// Trailing-window extremes. These are estimates of the limits, nothing more.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimates {
    /// limsup of `w`
    pub w_ordinary: f64,
    /// liminf of `w`
    pub w_uniform: f64,
    pub wstar_ordinary: f64,
    pub wstar_uniform: f64,
    pub kappa_lower: f64,
    pub kappa_upper: f64,
    pub rows_used: usize,
}

pub fn estimate_limits(series: &ScanSeries, window: f64) -> Result<LimitEstimates> {
    let recs: Vec<&BestApproxRecord> = series.records().collect();
    if recs.is_empty() {
        return Err(Error::InvalidArgument("no successful rows to estimate from".into()));
    }
    let take = (libm::ceil(recs.len() as f64 * window.clamp(0.0, 1.0)) as usize).clamp(1, recs.len());
    let tail = &recs[recs.len() - take..];
    let fold = |f: &dyn Fn(&BestApproxRecord) -> f64| -> (f64, f64) {
        tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            let v = f(r);
            (lo.min(v), hi.max(v))
        })
    };
    let w = fold(&|r| r.w);
    let ws = fold(&|r| r.wstar);
    let k = fold(&|r| r.kappa);
    Ok(LimitEstimates {
        w_ordinary: w.1,
        w_uniform: w.0,
        wstar_ordinary: ws.1,
        wstar_uniform: ws.0,
        kappa_lower: k.0,
        kappa_upper: k.1,
        rows_used: take,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::NumberSpec;

    fn e2() -> CertifiedReal {
        CertifiedReal::new(NumberSpec::e_minus_2()).unwrap()
    }

    #[test]
    fn linear_record_has_zero_kappa() {
        let r = local_exponents(1, 3.0, &e2(), &SearchClass::ALL, Strategy::Auto, &Tolerances::default()).unwrap();
        assert!((r.w - 1.6983).abs() < 1e-3, "{}", r.w);
        assert!((r.wstar - r.w).abs() < 1e-9);
        assert!(r.kappa.abs() < 1e-9);
        assert_eq!(r.alpha_minpoly, IntPoly::from_i64(&[-2, 3]));
        assert_eq!(r.lambda_local.unwrap(), r.w);
    }

    #[test]
    fn quadratic_record() {
        let r = local_exponents(2, 2.0, &e2(), &[], Strategy::Auto, &Tolerances::default()).unwrap();
        assert!((r.w - 4.9723).abs() < 1e-4, "{}", r.w);
        assert!(r.w_sep.is_none());
    }

    #[test]
    fn grid_counts() {
        assert_eq!(geometric_grid(2.0, 512.0, 2.0).unwrap().len(), 9);
        assert!(geometric_grid(1.0, 5.0, 2.0).is_err());
    }

    #[test]
    fn rational_scan_reports_possible_roots() {
        let xi = CertifiedReal::new(NumberSpec::rational(2, 7)).unwrap();
        let s = scan(&xi, 1, 2.0, 16.0, 2.0, &[], Strategy::Auto, &Tolerances::default()).unwrap();
        for row in &s.rows {
            let possible_root = matches!(row.record, Err(Error::PossibleRoot { .. }));
            assert_eq!(possible_root, row.x >= 7.0, "X = {}", row.x);
        }
    }

    #[test]
    fn constant_and_single_point_estimates() {
        let r = local_exponents(1, 3.0, &e2(), &[], Strategy::Auto, &Tolerances::default()).unwrap();
        let one = ScanSeries {
            spec: NumberSpec::e_minus_2(),
            n: 1,
            rows: vec![ScanRow { x: 3.0, record: Ok(r.clone()) }],
        };
        let e = estimate_limits(&one, 0.5).unwrap();
        assert_eq!(e.w_ordinary, e.w_uniform);
        let mut flat = r;
        flat.w = 2.0;
        let many = ScanSeries {
            rows: (0..6).map(|i| ScanRow { x: 3.0 + i as f64, record: Ok(flat.clone()) }).collect(),
            ..one
        };
        let e = estimate_limits(&many, 0.5).unwrap();
        assert_eq!((e.w_ordinary, e.w_uniform, e.rows_used), (2.0, 2.0, 3));
    }
}

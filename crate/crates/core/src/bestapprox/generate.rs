//! Candidate generators. Each returns every canonical coefficient vector in
//! the height box whose linear form satisfies `|L(a)| <= tau` (and possibly a
//! few slightly above it), so the caller can select exactly.

use alloc::vec;
use alloc::vec::Vec;

use super::{Cand, SearchContext};
use crate::error::{Error, Result};
use crate::lattice::FormLattice;

/// Last nonzero coordinate positive.
pub(crate) fn is_canonical(a: &[i64]) -> bool {
    a.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

fn push_if_inside(ctx: &SearchContext, a: &[i64], tau: f64, out: &mut Vec<Cand>) {
    let c = ctx.candidate(a);
    if libm::fabs(c.approx) - c.err <= tau {
        out.push(c);
    }
}

/// Every canonical vector of the box; the oracle strategy.
pub(crate) fn full_sweep(ctx: &SearchContext, tau: f64, budget: u64) -> Result<Vec<Cand>> {
    let n = ctx.degree;
    let h = ctx.height;
    let mut out = Vec::new();
    let mut work = 0u64;
    let mut a = vec![0i64; n + 1];
    for top in 0..=n {
        for lead in 1..=h {
            a.iter_mut().for_each(|x| *x = 0);
            a[top] = lead;
            for x in a.iter_mut().take(top) {
                *x = -h;
            }
            loop {
                work += 1;
                if work > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                let s = ctx.form_f64(&a);
                if libm::fabs(s) - ctx.f64_err(&a) <= tau {
                    push_if_inside(ctx, &a, tau, &mut out);
                }
                let mut i = 0;
                while i < top {
                    if a[i] < h {
                        a[i] += 1;
                        break;
                    }
                    a[i] = -h;
                    i += 1;
                }
                if i == top {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Sweep `a_n, ..., a_1`; the constant coefficient is then confined to an
/// interval of length `2 tau` around `-sum_{i>=1} a_i xi^i`.
pub(crate) fn offset_sweep(ctx: &SearchContext, tau: f64, budget: u64) -> Result<Vec<Cand>> {
    let n = ctx.degree;
    let h = ctx.height;
    let mut out = Vec::new();
    let mut work = 0u64;
    if 1.0 <= tau + 1e-12 {
        push_if_inside(ctx, &[1], tau, &mut out);
    }
    let mut a = vec![0i64; n + 1];
    for top in 1..=n {
        for lead in 1..=h {
            a.iter_mut().for_each(|x| *x = 0);
            a[top] = lead;
            for x in a.iter_mut().take(top).skip(1) {
                *x = -h;
            }
            loop {
                work += 1;
                if work > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                a[0] = 0;
                let s = ctx.form_f64(&a);
                let slack = tau + ctx.f64_err(&a) + ctx.f64_err(&[h]);
                let lo = libm::ceil(-s - slack).max(-(h as f64));
                let hi = libm::floor(-s + slack).min(h as f64);
                let mut c = lo;
                while c <= hi {
                    a[0] = c as i64;
                    push_if_inside(ctx, &a, tau, &mut out);
                    c += 1.0;
                }
                a[0] = 0;
                let mut i = 1;
                while i < top {
                    if a[i] < h {
                        a[i] += 1;
                        break;
                    }
                    a[i] = -h;
                    i += 1;
                }
                if i == top {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn form_lattice(ctx: &SearchContext, multiplier: f64) -> FormLattice {
    FormLattice::new(ctx.pows.clone(), ctx.scale, multiplier)
}

/// Enumerate the slab `|L(a)| <= tau` inside the box through the ellipsoid
/// `|a|^2 + (M L(a))^2 <= (n + 1) H^2 + (M tau)^2`.
pub(crate) fn lattice_slab(ctx: &SearchContext, tau: f64, budget: u64) -> Result<Vec<Cand>> {
    let n1 = ctx.degree + 1;
    let h = ctx.height as f64;
    let tau_in = tau + ctx.max_err();
    let m = (h / tau_in).clamp(1e-6, libm::ldexp(1.0, 44));
    let mut lat = form_lattice(ctx, m);
    lat.reduce()?;
    let r2 = (n1 as f64 * h * h) * (1.0 + 1e-9) + (m * tau_in) * (m * tau_in) * (1.0 + 1e-9) + 1e-6;
    let mut out = Vec::new();
    let hi = ctx.height as i128;
    lat.enumerate(r2, budget, |u| {
        if u.iter().all(|&x| x == 0) || u.iter().any(|&x| x > hi || x < -hi) {
            return;
        }
        let a: Vec<i64> = u.iter().map(|&x| x as i64).collect();
        if is_canonical(&a) {
            push_if_inside(ctx, &a, tau, &mut out);
        }
    })?;
    Ok(out)
}

/// Short vectors of reduced lattices at a few scales, restricted to the box.
pub(crate) fn heuristic(ctx: &SearchContext) -> Result<Vec<Cand>> {
    let n = ctx.degree;
    let h = ctx.height as f64;
    let mut out: Vec<Cand> = Vec::new();
    let mut seen = alloc::collections::BTreeSet::new();
    let hi = ctx.height as i128;
    let mut consider = |u: &[i128], out: &mut Vec<Cand>| {
        if u.iter().all(|&x| x == 0) || u.iter().any(|&x| x > hi || x < -hi) {
            return;
        }
        let mut a: Vec<i64> = u.iter().map(|&x| x as i64).collect();
        if !is_canonical(&a) {
            a.iter_mut().for_each(|x| *x = -*x);
        }
        if seen.insert(a.clone()) {
            out.push(ctx.candidate(&a));
        }
    };
    let top = libm::pow(h, (n + 1) as f64).min(libm::ldexp(1.0, 60));
    let mut m = top;
    for _ in 0..6 {
        let mut lat = form_lattice(ctx, m);
        if lat.reduce().is_ok() {
            let b = lat.basis().to_vec();
            for (i, u) in b.iter().enumerate() {
                consider(u, &mut out);
                for v in b.iter().skip(i + 1) {
                    let s: Option<Vec<i128>> = u.iter().zip(v).map(|(x, y)| x.checked_add(*y)).collect();
                    let d: Option<Vec<i128>> = u.iter().zip(v).map(|(x, y)| x.checked_sub(*y)).collect();
                    if let Some(s) = s {
                        consider(&s, &mut out);
                    }
                    if let Some(d) = d {
                        consider(&d, &mut out);
                    }
                }
            }
        }
        m /= h.max(2.0);
        if m < 1.0 {
            break;
        }
    }
    // T - round(xi) and the constant 1 are always admissible.
    let r = libm::round(ctx.xi_f64).clamp(-h, h) as i64;
    let mut lin = vec![0i64; n + 1];
    if n >= 1 {
        lin[0] = -r;
        lin[1] = 1;
        consider(&lin.iter().map(|&x| x as i128).collect::<Vec<_>>(), &mut out);
    }
    consider(&[1], &mut out);
    Ok(out)
}

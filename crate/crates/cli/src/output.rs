//! CSV and JSON forms of the library records.
//!
//! Floats print in shortest round-trip form; non-finite values print as
//! `inf`, `-inf` or `nan` (strings in JSON). Polynomials use the
//! constant-first comma text form.

use std::io::Write;

use anyhow::Result;
use dioph_core::constructions::{ConvergentRecord, KappaCertificate, KappaWitness, LemurPair, LiouCheck};
use dioph_core::exponents::{BestApproxRecord, LimitEstimates, ScanSeries};
use dioph_core::intpoly::Factorization;
use dioph_core::{Error, IntPoly, Tolerances};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::numfile;

pub const WITNESS_SCHEMA: &str = "kappa-witness/1";
pub const CERTIFICATE_SCHEMA: &str = "kappa-certificate/1";

pub fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

pub fn num(v: f64) -> Value {
    match serde_json::Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None => Value::String(fmt_f(v)),
    }
}

fn opt(v: Option<f64>) -> Value {
    v.map(num).unwrap_or(Value::Null)
}

fn pair(b: (f64, f64)) -> Value {
    json!([num(b.0), num(b.1)])
}

pub fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::from(i),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn poly(p: &IntPoly) -> Value {
    Value::from(p.to_string())
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidSpec(_) => "invalid-spec",
        Error::PrecisionCap { .. } => "precision-cap",
        Error::PossibleRoot { .. } => "possible-root",
        Error::BudgetExceeded { .. } => "budget-exceeded",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::NoCandidate(_) => "no-candidate",
        Error::Internal(_) => "internal",
    }
}

fn record_flags(r: &BestApproxRecord) -> String {
    let mut f = vec![if r.exact { "exact" } else { "heuristic" }];
    if r.tie {
        f.push("tie");
    }
    f.join(";")
}

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "X",
    "w",
    "wstar",
    "kappa",
    "w_sep",
    "w_irr",
    "lambda_local",
    "separable",
    "P_coeffs",
    "alpha_minpoly",
    "flags",
];

fn opt_text(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

pub fn write_scan_csv<W: Write>(series: &ScanSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in &series.rows {
        match &row.record {
            Ok(r) => w.write_record([
                r.n.to_string(),
                fmt_f(r.x),
                fmt_f(r.w),
                fmt_f(r.wstar),
                fmt_f(r.kappa),
                opt_text(r.w_sep),
                opt_text(r.w_irr),
                opt_text(r.lambda_local),
                r.separable.to_string(),
                r.poly.to_string(),
                r.alpha_minpoly.to_string(),
                record_flags(r),
            ])?,
            Err(e) => {
                let mut fields = vec![series.n.to_string(), fmt_f(row.x)];
                fields.extend(std::iter::repeat_n(String::new(), 9));
                fields.push(format!("error:{}", error_kind(e)));
                w.write_record(fields)?
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn record_json(r: &BestApproxRecord) -> Value {
    json!({
        "n": r.n,
        "X": num(r.x),
        "w": num(r.w),
        "wstar": num(r.wstar),
        "kappa": num(r.kappa),
        "w_sep": opt(r.w_sep),
        "w_irr": opt(r.w_irr),
        "lambda_local": opt(r.lambda_local),
        "separable": r.separable,
        "P_coeffs": poly(&r.poly),
        "alpha_minpoly": poly(&r.alpha_minpoly),
        "flags": record_flags(r),
        "ln_abs_P": pair(r.ln_value),
        "alpha_root_index": r.alpha_root_index,
        "alpha_approx": num(r.alpha_approx),
        "ln_objective": pair(r.ln_objective),
    })
}

pub fn estimates_json(e: &LimitEstimates) -> Value {
    json!({
        "label": "ESTIMATE",
        "w_ordinary": num(e.w_ordinary),
        "w_uniform": num(e.w_uniform),
        "wstar_ordinary": num(e.wstar_ordinary),
        "wstar_uniform": num(e.wstar_uniform),
        "kappa_lower": num(e.kappa_lower),
        "kappa_upper": num(e.kappa_upper),
        "rows_used": e.rows_used,
    })
}

pub fn scan_json(series: &ScanSeries, tol: &Tolerances) -> Value {
    let rows: Vec<Value> = series
        .rows
        .iter()
        .map(|row| match &row.record {
            Ok(r) => record_json(r),
            Err(e) => json!({
                "n": series.n,
                "X": num(row.x),
                "flags": format!("error:{}", error_kind(e)),
                "error": e.to_string(),
            }),
        })
        .collect();
    let estimates = dioph_core::exponents::estimate_limits(series, tol.estimator_window)
        .map(|e| estimates_json(&e))
        .unwrap_or(Value::Null);
    json!({
        "schema": "scan/1",
        "number": numfile::to_value(&series.spec),
        "n": series.n,
        "rows": rows,
        "estimates": estimates,
    })
}

pub fn factorization_json(f: &Factorization) -> Value {
    let factors: Vec<Value> = f
        .factors
        .iter()
        .map(|(q, m)| json!({"coeffs": q.coeffs().iter().map(big).collect::<Vec<_>>(), "mult": m}))
        .collect();
    json!({"content": big(&f.content), "sign": f.sign, "factors": factors})
}

pub fn convergent_json(c: &ConvergentRecord) -> Value {
    json!({
        "index": c.index,
        "a": big(&c.a),
        "b": big(&c.b),
        "poly": poly(&c.poly),
        "height": big(&c.height),
        "ln_abs_value": pair(c.value.ln_abs),
        "lambda_eff": opt(c.lambda_eff),
    })
}

pub fn witness_json(w: &KappaWitness, spec_value: Value) -> Value {
    json!({
        "schema": WITNESS_SCHEMA,
        "number": spec_value,
        "n": w.n,
        "k": w.k,
        "convergent": convergent_json(&w.convergent),
        "X": big(&w.x),
        "witness": poly(&w.witness),
        "w_lower": num(w.w_lower),
        "ln_root_objective": pair(w.ln_root_objective),
        "exclusion": num(w.exclusion),
        "root_is_best": w.root_is_best,
        "wstar_upper": num(w.wstar_upper),
        "kappa_lower": num(w.kappa_lower),
        "asymptotic": num(w.asymptotic),
        "threshold_lambda": num(w.threshold_lambda),
    })
}

pub fn lemur_json(p: &LemurPair) -> Value {
    json!({
        "P": poly(&p.p),
        "R": poly(&p.r),
        "C": num(p.c),
        "lambda": num(p.lambda),
        "height_bound": big(&p.height_bound),
        "ln_abs_P": pair(p.p_value.ln_abs),
        "ln_abs_R": pair(p.r_value.ln_abs),
        "ratio": pair(p.ratio),
        "determinant_lower": num(p.determinant_lower),
        "dirichlet_upper": num(p.dirichlet_upper),
    })
}

pub fn liou_json(c: &LiouCheck) -> Value {
    json!({
        "pair": lemur_json(&c.pair),
        "eps": num(c.eps),
        "X": num(c.x),
        "V1": poly(&c.v1),
        "V2": poly(&c.v2),
        "ln_abs_V1": pair(c.ln_v1),
        "ln_abs_V2": pair(c.ln_v2),
        "w_witness": num(c.w_witness),
        "w": opt(c.w),
        "w_sep": opt(c.w_sep),
        "separable_poly": c.separable_poly.as_ref().map(poly).unwrap_or(Value::Null),
        "bound": num(c.bound),
        "slack": num(c.slack),
        "exhaustive": c.exhaustive,
        "holds": c.holds(),
        "note": c.note,
    })
}

pub fn certificate_json(c: &KappaCertificate, spec_value: Value, tol: &Tolerances) -> Value {
    let factors: Vec<Value> = c
        .factors
        .iter()
        .map(|f| {
            json!({
                "poly": poly(&f.poly),
                "degree": f.degree,
                "multiplicity": f.multiplicity,
                "height": big(&f.height),
                "beta": num(f.beta),
                "gamma": opt(f.gamma),
            })
        })
        .collect();
    json!({
        "schema": CERTIFICATE_SCHEMA,
        "number": spec_value,
        "n": c.n,
        "X": num(c.x),
        "record": record_json(&c.record),
        "factor_count": c.factors.len(),
        "factors": factors,
        "bound": num(c.bound),
        "degree_sum": c.degree_sum,
        "height_excess": num(c.height_excess),
        "slack": num(c.slack(tol)),
        "criterion": c.criterion,
        "bound_holds": c.bound_holds(tol),
        "sides_hold": c.sides_hold(tol),
        "unit_height_factor": c.unit_height_factor,
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_become_strings() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(1.5), json!(1.5));
        assert_eq!(fmt_f(0.1), "0.1");
    }

    #[test]
    fn factorization_schema() {
        let f = dioph_core::intpoly::factor(&IntPoly::from_i64(&[1, 0, -3, 2]));
        let v = factorization_json(&f);
        assert_eq!(v, json!({"content": 1, "sign": 1, "factors": [{"coeffs": [-1, 1], "mult": 2}, {"coeffs": [1, 2], "mult": 1}]}));
    }
}

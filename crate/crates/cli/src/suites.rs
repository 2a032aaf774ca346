//! Verification suites. Each suite checks one inequality or construction on
//! a battery of instances and reports a signed margin per instance: the
//! distance to the boundary of the inequality, non-negative on success.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use dioph_core::bestapprox::{SearchClass, Strategy};
use dioph_core::bounds::{feldman_constant, gelfond_lower, gelfond_upper, liouville_constant};
use dioph_core::constructions::{
    kappa_certificate, lemur_pair, principal_convergents, theorem_co_witness, theorem_liou_check,
};
use dioph_core::exponents::{geometric_grid, local_exponents, BestApproxRecord};
use dioph_core::intpoly::{eval_certified, nearest_root_distance_f64, real_roots_squarefree, RootBox};
use dioph_core::realnum::Growth;
use dioph_core::{CertifiedReal, IntPoly, NumberSpec, Tolerances};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::numfile;
use crate::output::{error_kind, fmt_f, num};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    DirichletFloor,
    KappaNonneg,
    SeppBound,
    LemarCertificate,
    Feldman,
    Gelfond,
    LiouvilleIneq,
    ThmCo,
    ThmLiou,
    Lemur,
    ClassChain,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::DirichletFloor,
        Suite::KappaNonneg,
        Suite::SeppBound,
        Suite::LemarCertificate,
        Suite::Feldman,
        Suite::Gelfond,
        Suite::LiouvilleIneq,
        Suite::ThmCo,
        Suite::ThmLiou,
        Suite::Lemur,
        Suite::ClassChain,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::DirichletFloor => "dirichlet-floor",
            Suite::KappaNonneg => "kappa-nonneg",
            Suite::SeppBound => "sepp-bound",
            Suite::LemarCertificate => "lemar-certificate",
            Suite::Feldman => "feldman",
            Suite::Gelfond => "gelfond",
            Suite::LiouvilleIneq => "liouville-ineq",
            Suite::ThmCo => "thm-co",
            Suite::ThmLiou => "thm-liou",
            Suite::Lemur => "lemur",
            Suite::ClassChain => "class-chain",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match Suite::ALL.iter().find(|x| x.name() == s) {
            Some(x) => Ok(*x),
            None => {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                bail!("unknown suite '{s}'; expected one of {}", names.join(", "))
            }
        }
    }
}

/// Knobs shared by the suites. `None` fields take a per-suite default.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    /// Empty means the suite's default battery.
    pub numbers: Vec<NumberSpec>,
    pub n: Option<usize>,
    pub n_min: usize,
    pub x_start: f64,
    pub x_max: Option<f64>,
    pub ratio: f64,
    /// A single height bound instead of a grid.
    pub x: Option<f64>,
    pub k: u32,
    /// 1-based position among the principal convergents.
    pub index: Option<usize>,
    pub eps: f64,
    pub c: f64,
    pub count: Option<usize>,
    pub height: Option<i64>,
    pub seed: u64,
    /// Explicit polynomials replace the generated ones in the sweeps.
    pub polys: Vec<IntPoly>,
    pub strategy: Strategy,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            numbers: Vec::new(),
            n: None,
            n_min: 1,
            x_start: 2.0,
            x_max: None,
            ratio: 1.25,
            x: None,
            k: 2,
            index: None,
            eps: 0.5,
            c: 0.25,
            count: None,
            height: None,
            seed: 1,
            polys: Vec::new(),
            strategy: Strategy::Auto,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub key: String,
    pub number: Option<NumberSpec>,
    pub n: Option<usize>,
    pub x: Option<f64>,
    pub poly: Option<String>,
    pub pass: bool,
    /// Signed margin; negative exactly when the check failed.
    pub slack: f64,
    pub detail: String,
    /// Arguments that rerun this instance alone.
    pub replay: Vec<String>,
}

impl Instance {
    fn new(key: String) -> Self {
        Instance {
            key,
            number: None,
            n: None,
            x: None,
            poly: None,
            pass: false,
            slack: f64::NEG_INFINITY,
            detail: String::new(),
            replay: Vec::new(),
        }
    }

    fn judge(mut self, slack: f64, detail: String) -> Self {
        self.pass = slack >= 0.0;
        self.slack = slack;
        self.detail = detail;
        self
    }

    fn failed(mut self, detail: String) -> Self {
        self.pass = false;
        self.slack = f64::NEG_INFINITY;
        self.detail = detail;
        self
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: Vec<Instance>,
    /// Measured constants and other aggregate figures.
    pub summary: Vec<(String, f64)>,
    pub tolerances: Tolerances,
    pub runtime: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.instances.iter().filter(|i| i.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.instances.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        !self.instances.is_empty() && self.failed() == 0
    }

    pub fn worst_slack(&self) -> f64 {
        self.instances.iter().map(|i| i.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// The report without its runtime, which would break byte-for-byte replay.
    pub fn to_json(&self) -> Value {
        let instances: Vec<Value> = self
            .instances
            .iter()
            .map(|i| {
                json!({
                    "key": i.key,
                    "number": i.number.as_ref().map(numfile::to_value),
                    "n": i.n,
                    "X": i.x.map(num),
                    "poly": i.poly,
                    "pass": i.pass,
                    "slack": num(i.slack),
                    "detail": i.detail,
                    "replay": i.replay,
                })
            })
            .collect();
        let summary: serde_json::Map<String, Value> =
            self.summary.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
        json!({
            "schema": "suite-report/1",
            "suite": self.suite.name(),
            "instance_count": self.instances.len(),
            "passed": self.passed(),
            "failed": self.failed(),
            "worst_slack": num(self.worst_slack()),
            "summary": summary,
            "tolerances": {
                "slack_c": num(self.tolerances.slack_c),
                "max_precision_bits": self.tolerances.max_precision_bits,
                "enum_budget": self.tolerances.enum_budget,
                "estimator_window": num(self.tolerances.estimator_window),
            },
            "instances": instances,
        })
    }

    /// One line per failing instance plus a totals line.
    pub fn text(&self) -> String {
        let mut s = String::new();
        for i in self.instances.iter().filter(|i| !i.pass) {
            s += &format!("FAIL {} slack={} {}\n  replay: dioph {}\n", i.key, fmt_f(i.slack), i.detail, i.replay.join(" "));
        }
        s += &format!(
            "{}: {}/{} passed, worst slack {}\n",
            self.suite,
            self.passed(),
            self.instances.len(),
            fmt_f(self.worst_slack())
        );
        s
    }
}

pub fn run(suite: Suite, p: &SuiteParams, tol: &Tolerances) -> Result<SuiteReport> {
    let start = Instant::now();
    let (instances, summary) = match suite {
        Suite::DirichletFloor | Suite::KappaNonneg | Suite::SeppBound | Suite::ClassChain => {
            (grid_suite(suite, p, tol)?, Vec::new())
        }
        Suite::LemarCertificate => (certificate_suite(p, tol)?, Vec::new()),
        Suite::Feldman => feldman_suite(p, tol)?,
        Suite::Gelfond => gelfond_suite(p)?,
        Suite::LiouvilleIneq => liouville_suite(p)?,
        Suite::ThmCo => (co_suite(p, tol)?, Vec::new()),
        Suite::ThmLiou => (liou_suite(p, tol)?, Vec::new()),
        Suite::Lemur => (lemur_suite(p, tol)?, Vec::new()),
    };
    let mut instances = instances;
    let extra = tolerance_flags(tol);
    for i in &mut instances {
        i.replay.extend(extra.iter().cloned());
    }
    Ok(SuiteReport {
        suite,
        instances,
        summary,
        tolerances: *tol,
        runtime: start.elapsed(),
    })
}

/// Global flags reproducing every tolerance that differs from the default.
pub fn tolerance_flags(tol: &Tolerances) -> Vec<String> {
    let d = Tolerances::default();
    let mut v = Vec::new();
    if tol.slack_c != d.slack_c {
        v.extend(["--slack-c".to_string(), fmt_f(tol.slack_c)]);
    }
    if tol.max_precision_bits != d.max_precision_bits {
        v.extend(["--max-precision-bits".to_string(), tol.max_precision_bits.to_string()]);
    }
    if tol.enum_budget != d.enum_budget {
        v.extend(["--enum-budget".to_string(), tol.enum_budget.to_string()]);
    }
    if tol.estimator_window != d.estimator_window {
        v.extend(["--estimator-window".to_string(), fmt_f(tol.estimator_window)]);
    }
    v
}

fn battery(p: &SuiteParams, default: fn() -> Vec<NumberSpec>) -> Vec<NumberSpec> {
    if p.numbers.is_empty() {
        default()
    } else {
        p.numbers.clone()
    }
}

fn liouville_six() -> Vec<NumberSpec> {
    vec![NumberSpec::liouville(2, Growth::Geometric(6.0), 1, None)]
}

fn certified(spec: &NumberSpec, tol: &Tolerances) -> Result<CertifiedReal> {
    Ok(CertifiedReal::with_cap(spec.clone(), tol.max_precision_bits)?)
}

fn strategy_arg(s: Strategy) -> &'static str {
    match s {
        Strategy::Auto => "auto",
        Strategy::FullSweep => "full",
        Strategy::OffsetSweep => "offset",
        Strategy::Lattice => "lattice",
        Strategy::Heuristic => "heuristic",
    }
}

fn base_replay(suite: Suite, spec: Option<&NumberSpec>, p: &SuiteParams) -> Vec<String> {
    let mut r = vec!["verify".into(), "--suite".into(), suite.name().into()];
    if let Some(s) = spec {
        r.push("--number".into());
        r.push(numfile::to_json(s));
    }
    if p.strategy != Strategy::Auto {
        r.push("--strategy".into());
        r.push(strategy_arg(p.strategy).into());
    }
    r
}

fn push_args(r: &mut Vec<String>, args: &[(&str, String)]) {
    for (k, v) in args {
        r.push(format!("--{k}"));
        r.push(v.clone());
    }
}

struct GridJob {
    spec: NumberSpec,
    xi: CertifiedReal,
    n: usize,
    x: f64,
}

fn grid_jobs(p: &SuiteParams, tol: &Tolerances, default_n: usize, default_max: f64) -> Result<Vec<GridJob>> {
    let grid = match p.x {
        Some(x) => vec![x],
        None => geometric_grid(p.x_start, p.x_max.unwrap_or(default_max), p.ratio)?,
    };
    let top = p.n.unwrap_or(default_n);
    if p.n_min < 1 || p.n_min > top {
        bail!("degree range {}..={top} is empty", p.n_min);
    }
    let mut jobs = Vec::new();
    for spec in battery(p, numfile::standard_battery) {
        let xi = certified(&spec, tol)?;
        for n in p.n_min..=top {
            for &x in &grid {
                jobs.push(GridJob {
                    spec: spec.clone(),
                    xi: xi.clone(),
                    n,
                    x,
                });
            }
        }
    }
    Ok(jobs)
}

fn grid_instance(suite: Suite, j: &GridJob, p: &SuiteParams) -> Instance {
    let label = numfile::label(&j.spec);
    let mut i = Instance::new(format!("{label} n={} X={}", j.n, fmt_f(j.x)));
    i.number = Some(j.spec.clone());
    i.n = Some(j.n);
    i.x = Some(j.x);
    let mut r = base_replay(suite, Some(&j.spec), p);
    push_args(&mut r, &[("n-min", j.n.to_string()), ("n", j.n.to_string()), ("x", fmt_f(j.x))]);
    i.replay = r;
    i
}

const EXACT_SLACK: f64 = 1e-9;

fn judge_record(suite: Suite, r: &BestApproxRecord, tol: &Tolerances) -> Option<(f64, String)> {
    let n = r.n as f64;
    let s = tol.slack(r.x);
    match suite {
        Suite::DirichletFloor => Some((r.w - (n - s), format!("w={} floor={}", fmt_f(r.w), fmt_f(n - s)))),
        Suite::KappaNonneg => Some((r.kappa + s, format!("kappa={} floor={}", fmt_f(r.kappa), fmt_f(-s)))),
        Suite::SeppBound => r.separable.then(|| {
            let cap = n - 1.0 + s;
            (cap - r.kappa, format!("kappa={} cap={}", fmt_f(r.kappa), fmt_f(cap)))
        }),
        Suite::ClassChain => {
            let sep = r.w_sep?;
            let irr = r.w_irr?;
            let m = (r.w - sep).min(sep - irr) + EXACT_SLACK;
            Some((m, format!("w={} w_sep={} w_irr={}", fmt_f(r.w), fmt_f(sep), fmt_f(irr))))
        }
        _ => None,
    }
}

fn grid_suite(suite: Suite, p: &SuiteParams, tol: &Tolerances) -> Result<Vec<Instance>> {
    let jobs = grid_jobs(p, tol, 3, 500.0)?;
    let classes: &[SearchClass] = if suite == Suite::ClassChain { &SearchClass::ALL } else { &[] };
    let results: Vec<(Instance, Option<BestApproxRecord>)> = jobs
        .par_iter()
        .map(|j| {
            let inst = grid_instance(suite, j, p);
            match local_exponents(j.n, j.x, &j.xi, classes, p.strategy, tol) {
                Ok(r) => {
                    let mut inst = inst;
                    inst.poly = Some(r.poly.to_string());
                    (inst, Some(r))
                }
                Err(e) => (inst.failed(format!("{}: {e}", error_kind(&e))), None),
            }
        })
        .collect();
    let mut out = Vec::new();
    for (k, (inst, rec)) in results.iter().enumerate() {
        let Some(r) = rec else {
            out.push(inst.clone());
            continue;
        };
        if let Some((slack, detail)) = judge_record(suite, r, tol) {
            out.push(inst.clone().judge(slack, detail));
        }
        // monotonicity in n at the same X, against the previous degree
        if suite == Suite::ClassChain && r.n > p.n_min {
            let prev = results[..k]
                .iter()
                .rev()
                .find(|(_, q)| q.as_ref().is_some_and(|q| q.n + 1 == r.n && q.x == r.x))
                .and_then(|(_, q)| q.as_ref());
            if let Some(q) = prev {
                let mut m = inst.clone();
                m.key = format!("{} monotone", m.key);
                m.replay = {
                    let mut rr = base_replay(suite, m.number.as_ref(), p);
                    push_args(&mut rr, &[("n-min", q.n.to_string()), ("n", r.n.to_string()), ("x", fmt_f(r.x))]);
                    rr
                };
                out.push(m.judge(
                    r.w - q.w + EXACT_SLACK,
                    format!("w(n={})={} w(n={})={}", q.n, fmt_f(q.w), r.n, fmt_f(r.w)),
                ));
            }
        }
    }
    Ok(out)
}

fn certificate_suite(p: &SuiteParams, tol: &Tolerances) -> Result<Vec<Instance>> {
    let jobs = grid_jobs(p, tol, 5, 200.0)?;
    Ok(jobs
        .par_iter()
        .map(|j| {
            let inst = grid_instance(Suite::LemarCertificate, j, p);
            match kappa_certificate(j.n, j.x, &j.xi, p.strategy, tol) {
                Ok(c) => {
                    let s = c.slack(tol);
                    let bound_margin = c.bound + s - c.record.kappa;
                    let degree_margin = c.n as f64 - c.degree_sum as f64;
                    let height_margin = s - c.height_excess;
                    let shape: Vec<String> = c
                        .factors
                        .iter()
                        .map(|f| format!("({})^{}", f.poly, f.multiplicity))
                        .collect();
                    let mut inst = inst;
                    inst.poly = Some(c.record.poly.to_string());
                    inst.judge(
                        bound_margin.min(degree_margin).min(height_margin),
                        format!(
                            "kappa={} B={} degree_sum={} height_excess={} criterion={} factors={}",
                            fmt_f(c.record.kappa),
                            fmt_f(c.bound),
                            c.degree_sum,
                            fmt_f(c.height_excess),
                            c.criterion,
                            shape.join("")
                        ),
                    )
                }
                Err(e) => inst.failed(format!("{}: {e}", error_kind(&e))),
            }
        })
        .collect())
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize, height: i64) -> IntPoly {
    loop {
        let mut c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-height..=height)).collect();
        if c[degree] == 0 {
            continue;
        }
        if c[degree] < 0 {
            c.iter_mut().for_each(|v| *v = -*v);
        }
        return IntPoly::from_i64(&c);
    }
}

fn feldman_polys(p: &SuiteParams) -> Vec<IntPoly> {
    if !p.polys.is_empty() {
        return p.polys.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let top = p.n.unwrap_or(5);
    let h = p.height.unwrap_or(30);
    let mut out = Vec::new();
    while out.len() < p.count.unwrap_or(1000) {
        let d = rng.gen_range(1..=top);
        let q = random_poly(&mut rng, d, h);
        if q.is_separable() {
            out.push(q);
        }
    }
    out
}

/// `|xi - alpha| / (|P(xi)| H^{d-2})` for the root `alpha` nearest to `xi`;
/// for linear `P` the ratio `|xi - alpha| |a| / |P(xi)|`, which is exactly 1.
fn feldman_ratio(q: &IntPoly, xi: &CertifiedReal) -> dioph_core::Result<f64> {
    let v = eval_certified(q, xi, 1e-9)?;
    let abs = v.ln_mid().exp();
    let dist = nearest_root_distance_f64(q, xi.approx()).unwrap_or(f64::INFINITY);
    let d = q.deg();
    if d == 1 {
        let a = q.leading().unwrap().to_f64().unwrap().abs();
        return Ok(dist * a / abs);
    }
    let h = q.height().to_f64().unwrap();
    Ok(dist / (abs * h.powi(d as i32 - 2)))
}

type Sweep = (Vec<Instance>, Vec<(String, f64)>);

fn feldman_suite(p: &SuiteParams, tol: &Tolerances) -> Result<Sweep> {
    let specs = battery(p, numfile::standard_battery);
    let mut polys: Vec<(IntPoly, &'static str)> = feldman_polys(p).into_iter().map(|q| (q, "random")).collect();
    // the separable best polynomials met along the scans
    if p.polys.is_empty() {
        let grid = geometric_grid(p.x_start, p.x_max.unwrap_or(200.0), p.ratio)?;
        let jobs: Vec<(usize, f64)> = (2..=p.n.unwrap_or(5).min(3))
            .flat_map(|n| grid.iter().map(move |&x| (n, x)))
            .collect();
        for spec in &specs {
            let xi = certified(spec, tol)?;
            let found: Vec<IntPoly> = jobs
                .par_iter()
                .filter_map(|&(n, x)| local_exponents(n, x, &xi, &[], p.strategy, tol).ok())
                .filter(|r| r.separable && r.poly.deg() >= 2)
                .map(|r| r.poly)
                .collect();
            for q in found {
                if !polys.iter().any(|(o, _)| *o == q) {
                    polys.push((q, "scan"));
                }
            }
        }
    }
    let mut cases = Vec::new();
    for spec in &specs {
        let xi = certified(spec, tol)?;
        for (q, origin) in &polys {
            cases.push((spec.clone(), xi.clone(), q.clone(), *origin));
        }
    }
    let ratios: Vec<dioph_core::Result<f64>> = cases.par_iter().map(|(_, xi, q, _)| feldman_ratio(q, xi)).collect();
    let top = polys.iter().map(|(q, _)| q.deg()).max().unwrap_or(1);
    let mut instances = Vec::new();
    let mut summary = Vec::new();
    for d in 1..=top {
        let mut inst = Instance::new(format!("degree {d}"));
        inst.n = Some(d);
        let mut worst: Option<(f64, usize)> = None;
        let mut errors = Vec::new();
        let mut count = 0;
        for (k, ((_, _, q, _), r)) in cases.iter().zip(&ratios).enumerate() {
            if q.deg() != d {
                continue;
            }
            count += 1;
            match r {
                Ok(v) if worst.is_none_or(|(w, _)| *v > w) => worst = Some((*v, k)),
                Ok(_) => {}
                Err(e) => errors.push(format!("{} at {}: {e}", q, numfile::label(&cases[k].0))),
            }
        }
        if count == 0 {
            continue;
        }
        let (ratio, at) = worst.unwrap_or((f64::NAN, 0));
        let (spec, _, q, origin) = &cases[at];
        inst.number = Some(spec.clone());
        inst.poly = Some(q.to_string());
        let mut rr = base_replay(Suite::Feldman, Some(spec), p);
        push_args(&mut rr, &[("poly", q.to_string())]);
        inst.replay = rr;
        summary.push((format!("max_ratio_deg{d}"), ratio));
        let (slack, bound) = if d == 1 {
            (EXACT_SLACK - (ratio - 1.0).abs(), 1.0)
        } else {
            let c = feldman_constant(d);
            summary.push((format!("constant_deg{d}"), c));
            (1.0 - ratio / c, c)
        };
        let detail = format!(
            "{count} cases, max ratio {} ({origin}), bound {}{}",
            fmt_f(ratio),
            fmt_f(bound),
            if errors.is_empty() { String::new() } else { format!("; errors: {}", errors.join("; ")) }
        );
        inst = inst.judge(slack, detail);
        if !errors.is_empty() {
            inst.pass = false;
        }
        instances.push(inst);
    }
    Ok((instances, summary))
}

fn polys_of_degree(d: usize, h: i64) -> Vec<Vec<i64>> {
    let side = (2 * h + 1) as usize;
    let lower = side.pow(d as u32);
    let mut out = Vec::with_capacity(lower * h as usize);
    for lead in 1..=h {
        for code in 0..lower {
            let mut c = Vec::with_capacity(d + 1);
            let mut m = code;
            for _ in 0..d {
                c.push((m % side) as i64 - h);
                m /= side;
            }
            c.push(lead);
            out.push(c);
        }
    }
    out
}

fn mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn height_i64(a: &[i64]) -> i64 {
    a.iter().map(|v| v.abs()).max().unwrap_or(0)
}

struct GelfondTally {
    count: u64,
    min_ratio: (f64, Vec<i64>, Vec<i64>),
    max_ratio: (f64, Vec<i64>, Vec<i64>),
}

impl GelfondTally {
    fn new() -> Self {
        GelfondTally {
            count: 0,
            min_ratio: (f64::INFINITY, Vec::new(), Vec::new()),
            max_ratio: (f64::NEG_INFINITY, Vec::new(), Vec::new()),
        }
    }

    fn add(&mut self, q: &[i64], r: &[i64]) {
        let ratio = height_i64(&mul_i64(q, r)) as f64 / (height_i64(q) * height_i64(r)) as f64;
        self.count += 1;
        if ratio < self.min_ratio.0 {
            self.min_ratio = (ratio, q.to_vec(), r.to_vec());
        }
        if ratio > self.max_ratio.0 {
            self.max_ratio = (ratio, q.to_vec(), r.to_vec());
        }
    }

    fn merge(mut self, o: GelfondTally) -> Self {
        self.count += o.count;
        if o.min_ratio.0 < self.min_ratio.0 {
            self.min_ratio = o.min_ratio;
        }
        if o.max_ratio.0 > self.max_ratio.0 {
            self.max_ratio = o.max_ratio;
        }
        self
    }
}

fn gelfond_instance(p: &SuiteParams, key: String, n: usize, t: &GelfondTally, summary: &mut Vec<(String, f64)>) -> Instance {
    let (lo, hi) = (gelfond_lower(n), gelfond_upper(n));
    let low_margin = t.min_ratio.0 / lo - 1.0;
    let high_margin = hi / t.max_ratio.0 - 1.0;
    let (worst, q, r) = if low_margin <= high_margin {
        (low_margin, &t.min_ratio.1, &t.min_ratio.2)
    } else {
        (high_margin, &t.max_ratio.1, &t.max_ratio.2)
    };
    summary.push((format!("{key} min_ratio"), t.min_ratio.0));
    summary.push((format!("{key} max_ratio"), t.max_ratio.0));
    let (qp, rp) = (IntPoly::from_i64(q), IntPoly::from_i64(r));
    let mut inst = Instance::new(key);
    inst.n = Some(n);
    inst.poly = Some(format!("{qp} * {rp}"));
    let mut rr = base_replay(Suite::Gelfond, None, p);
    push_args(&mut rr, &[("poly", qp.to_string()), ("poly", rp.to_string())]);
    inst.replay = rr;
    inst.judge(
        worst,
        format!(
            "{} products, ratio in [{}, {}], bounds [{}, {}]",
            t.count,
            fmt_f(t.min_ratio.0),
            fmt_f(t.max_ratio.0),
            fmt_f(lo),
            fmt_f(hi)
        ),
    )
}

fn gelfond_suite(p: &SuiteParams) -> Result<Sweep> {
    let mut instances = Vec::new();
    let mut summary = Vec::new();
    if !p.polys.is_empty() {
        if p.polys.len() != 2 {
            bail!("the gelfond suite replays one product: give exactly two --poly");
        }
        let q = p.polys[0].to_i64().ok_or_else(|| anyhow::anyhow!("coefficients too large"))?;
        let r = p.polys[1].to_i64().ok_or_else(|| anyhow::anyhow!("coefficients too large"))?;
        let mut t = GelfondTally::new();
        t.add(&q, &r);
        let n = q.len() + r.len() - 2;
        instances.push(gelfond_instance(p, format!("product degree {n}"), n, &t, &mut summary));
        return Ok((instances, summary));
    }
    let top = p.n.unwrap_or(3);
    let h = p.height.unwrap_or(10);
    let by_degree: Vec<Vec<Vec<i64>>> = (0..top).map(|d| polys_of_degree(d + 1, h)).collect();
    for n in 2..=top {
        let mut t = GelfondTally::new();
        for dq in 1..=n / 2 {
            let dr = n - dq;
            let (qs, rs) = (&by_degree[dq - 1], &by_degree[dr - 1]);
            let part = qs
                .par_iter()
                .enumerate()
                .fold(GelfondTally::new, |mut t, (i, q)| {
                    // unordered pairs when both factors have the same degree
                    let from = if dq == dr { i } else { 0 };
                    for r in &rs[from..] {
                        t.add(q, r);
                    }
                    t
                })
                .reduce(GelfondTally::new, GelfondTally::merge);
            t = t.merge(part);
        }
        instances.push(gelfond_instance(p, format!("exhaustive degree {n} height {h}"), n, &t, &mut summary));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let samples = p.count.unwrap_or(2000);
    let mut tallies: Vec<GelfondTally> = (0..=8).map(|_| GelfondTally::new()).collect();
    for _ in 0..samples {
        let dq = rng.gen_range(1..=7);
        let dr = rng.gen_range(1..=8 - dq);
        let q = random_poly(&mut rng, dq, 50).to_i64().unwrap();
        let r = random_poly(&mut rng, dr, 50).to_i64().unwrap();
        tallies[dq + dr].add(&q, &r);
    }
    for (n, t) in tallies.iter().enumerate() {
        if t.count > 0 {
            instances.push(gelfond_instance(p, format!("random degree {n} height 50"), n, t, &mut summary));
        }
    }
    Ok((instances, summary))
}

struct AlgRoot {
    poly: IntPoly,
    degree: usize,
    height: f64,
    root: RootBox,
    approx: f64,
}

fn algebraic_roots(polys: &[IntPoly]) -> Vec<AlgRoot> {
    let mut out: Vec<AlgRoot> = polys
        .par_iter()
        .flat_map_iter(|q| {
            let h = q.height().to_f64().unwrap();
            real_roots_squarefree(q).into_iter().map(move |r| {
                let root = r.refine(64);
                AlgRoot {
                    poly: q.clone(),
                    degree: q.deg(),
                    height: h,
                    approx: root.approx(),
                    root,
                }
            })
        })
        .collect();
    out.sort_by(|a, b| a.approx.total_cmp(&b.approx));
    out
}

fn irreducible_polys(top: usize, h: i64) -> Vec<IntPoly> {
    (1..=top)
        .flat_map(|d| polys_of_degree(d, h))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| IntPoly::from_i64(&c))
        .filter(|q| q.is_primitive() && q.is_irreducible())
        .collect()
}

/// `|alpha - beta| / (c(m, n) H(alpha)^{-n} H(beta)^{-m})` minimized over pairs
/// of each degree combination. Pairs far apart cannot violate the bound and
/// are skipped.
fn liouville_suite(p: &SuiteParams) -> Result<Sweep> {
    let top = p.n.unwrap_or(3);
    let polys = if p.polys.is_empty() {
        irreducible_polys(top, p.height.unwrap_or(8))
    } else {
        p.polys.iter().map(|q| q.primitive_part()).collect()
    };
    let top = polys.iter().map(|q| q.deg()).max().unwrap_or(1);
    let roots = algebraic_roots(&polys);
    let reach: Vec<f64> = roots
        .iter()
        .map(|a| {
            (1..=top)
                .map(|n| liouville_constant(a.degree, n) * a.height.powi(-(n as i32)))
                .fold(0.0, f64::max)
        })
        .collect();
    // (ratio, i, j) per (m, n) with m <= n
    type Worst = Vec<Option<(f64, usize, usize)>>;
    let cell = |m: usize, n: usize| (m - 1) * top + (n - 1);
    let worst: Worst = (0..roots.len())
        .into_par_iter()
        .fold(
            || vec![None; top * top],
            |mut acc: Worst, i| {
                let a = &roots[i];
                for (j, b) in roots.iter().enumerate().skip(i + 1) {
                    if b.approx - a.approx > reach[i] * (1.0 + 1e-9) + 1e-15 {
                        break;
                    }
                    if b.poly == a.poly {
                        continue;
                    }
                    let gap = b.root.interval.sub(&a.root.interval).lo_f64().max(0.0);
                    let (lo, hi) = if a.degree <= b.degree { (a, b) } else { (b, a) };
                    let (m, n) = (lo.degree, hi.degree);
                    let bound = liouville_constant(m, n) * lo.height.powi(-(n as i32)) * hi.height.powi(-(m as i32));
                    let ratio = gap / bound;
                    let c = &mut acc[cell(m, n)];
                    if c.is_none_or(|(w, _, _)| ratio < w) {
                        *c = Some((ratio, i, j));
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![None; top * top],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    if let Some(b) = b {
                        if a.is_none_or(|(w, _, _)| b.0 < w) {
                            *a = Some(b);
                        }
                    }
                }
                x
            },
        );
    let mut instances = Vec::new();
    let mut summary = vec![("roots".to_string(), roots.len() as f64), ("polynomials".to_string(), polys.len() as f64)];
    for m in 1..=top {
        for n in m..=top {
            let mut inst = Instance::new(format!("degrees {m},{n}"));
            inst.n = Some(n);
            match worst[cell(m, n)] {
                Some((ratio, i, j)) => {
                    let (a, b) = (&roots[i], &roots[j]);
                    inst.poly = Some(format!("{} ; {}", a.poly, b.poly));
                    let mut rr = base_replay(Suite::LiouvilleIneq, None, p);
                    push_args(&mut rr, &[("poly", a.poly.to_string()), ("poly", b.poly.to_string())]);
                    inst.replay = rr;
                    summary.push((format!("min_ratio {m},{n}"), ratio));
                    instances.push(inst.judge(
                        ratio - 1.0,
                        format!(
                            "closest pair relative to the bound: {} ~ {} and {} ~ {}, ratio {}, constant {}",
                            a.poly,
                            fmt_f(a.approx),
                            b.poly,
                            fmt_f(b.approx),
                            fmt_f(ratio),
                            fmt_f(liouville_constant(m, n))
                        ),
                    ));
                }
                None => {
                    // no pair came within reach of the bound
                    instances.push(inst.judge(f64::INFINITY, "no pair within reach of the bound".into()));
                }
            }
        }
    }
    Ok((instances, summary))
}

fn convergent_at(xi: &CertifiedReal, index: usize) -> dioph_core::Result<dioph_core::constructions::ConvergentRecord> {
    if index == 0 {
        return Err(dioph_core::Error::InvalidArgument("convergent indices start at 1".into()));
    }
    Ok(principal_convergents(xi, index, 2.0)?.remove(index - 1))
}

fn construction_instance(suite: Suite, spec: &NumberSpec, p: &SuiteParams, key: &str, args: &[(&str, String)]) -> Instance {
    let mut inst = Instance::new(format!("{} {key}", numfile::label(spec)));
    inst.number = Some(spec.clone());
    let mut rr = base_replay(suite, Some(spec), p);
    push_args(&mut rr, args);
    inst.replay = rr;
    inst
}

/// The witness at the requested convergent, then a cross-check of its bounds
/// against exhaustive search at the smallest convergent with `X <= x_max`.
fn co_suite(p: &SuiteParams, tol: &Tolerances) -> Result<Vec<Instance>> {
    let n = p.n.unwrap_or(2);
    let k = p.k;
    let index = p.index.unwrap_or(2);
    let cross_max = p.x_max.unwrap_or(50.0);
    let mut out = Vec::new();
    for spec in battery(p, liouville_six) {
        let xi = certified(&spec, tol)?;
        let args = [("n", n.to_string()), ("k", k.to_string()), ("index", index.to_string())];
        let inst = construction_instance(Suite::ThmCo, &spec, p, &format!("n={n} k={k} index={index}"), &args);
        let judged = convergent_at(&xi, index)
            .and_then(|c| theorem_co_witness(n, k, &c, &xi))
            .map(|w| {
                let x = w.x.to_f64().unwrap_or(f64::INFINITY);
                let s = tol.slack(x);
                let asym_margin = w.kappa_lower - (w.asymptotic - s);
                let lam = w.convergent.lambda_eff.unwrap_or(f64::NAN);
                let beyond = lam > w.threshold_lambda;
                let margin = if beyond { asym_margin.min(w.kappa_lower - (n as f64 - 1.0)) } else { asym_margin };
                let mut i = inst.clone();
                i.n = Some(n);
                i.x = Some(x);
                i.poly = Some(w.witness.to_string());
                i.judge(
                    margin,
                    format!(
                        "kappa_lower={} asymptotic={} lambda_eff={} threshold={} exceeds_n_minus_1={} root_is_best={}",
                        fmt_f(w.kappa_lower),
                        fmt_f(w.asymptotic),
                        fmt_f(lam),
                        fmt_f(w.threshold_lambda),
                        w.kappa_lower > n as f64 - 1.0,
                        w.root_is_best
                    ),
                )
            });
        out.push(judged.unwrap_or_else(|e| inst.failed(format!("{}: {e}", error_kind(&e)))));

        let cross = construction_instance(Suite::ThmCo, &spec, p, &format!("n={n} k={k} cross-check X<={}", fmt_f(cross_max)), &[
            ("n", n.to_string()),
            ("k", k.to_string()),
            ("index", index.to_string()),
            ("x-max", fmt_f(cross_max)),
        ]);
        out.push(co_cross_check(cross, n, k, cross_max, &xi, p, tol));
    }
    Ok(out)
}

fn co_cross_check(
    inst: Instance,
    n: usize,
    k: u32,
    cross_max: f64,
    xi: &CertifiedReal,
    p: &SuiteParams,
    tol: &Tolerances,
) -> Instance {
    for j in 1.. {
        let c = match principal_convergents(xi, j, 2.0) {
            Ok(mut c) => c.remove(j - 1),
            Err(e) => return inst.failed(format!("{}: {e}", error_kind(&e))),
        };
        if c.height.to_f64().unwrap_or(f64::INFINITY).powi(k as i32) > cross_max * (n as f64 + 1.0) {
            break;
        }
        let Ok(w) = theorem_co_witness(n, k, &c, xi) else { continue };
        let x = w.x.to_f64().unwrap_or(f64::INFINITY);
        if x > cross_max {
            break;
        }
        if x < 2.0 {
            continue;
        }
        let rec = match local_exponents(n, x, xi, &[], p.strategy, tol) {
            Ok(r) => r,
            Err(e) => return inst.failed(format!("{}: {e}", error_kind(&e))),
        };
        let mut m = (rec.w - w.w_lower).min(w.wstar_upper - rec.wstar).min(rec.kappa - w.kappa_lower) + EXACT_SLACK;
        let best_matches = !w.root_is_best || rec.alpha_minpoly == w.convergent.poly;
        if !best_matches {
            m = m.min(-1.0);
        }
        let mut inst = inst;
        inst.n = Some(n);
        inst.x = Some(x);
        inst.poly = Some(w.witness.to_string());
        return inst.judge(
            m,
            format!(
                "principal convergent {j}: w_lower={} w={} wstar_upper={} wstar={} kappa_lower={} kappa={} best={}",
                fmt_f(w.w_lower),
                fmt_f(rec.w),
                fmt_f(w.wstar_upper),
                fmt_f(rec.wstar),
                fmt_f(w.kappa_lower),
                fmt_f(rec.kappa),
                rec.alpha_minpoly
            ),
        );
    }
    inst.failed(format!("no principal convergent satisfies the hypothesis with X <= {}", fmt_f(cross_max)))
}

fn liou_suite(p: &SuiteParams, tol: &Tolerances) -> Result<Vec<Instance>> {
    let index = p.index.unwrap_or(1);
    let mut out = Vec::new();
    for spec in battery(p, liouville_six) {
        let xi = certified(&spec, tol)?;
        let args = [("index", index.to_string()), ("eps", fmt_f(p.eps))];
        let inst = construction_instance(Suite::ThmLiou, &spec, p, &format!("index={index} eps={}", fmt_f(p.eps)), &args);
        let judged = convergent_at(&xi, index)
            .and_then(|c| theorem_liou_check(&xi, &c, p.eps, p.strategy, tol))
            .map(|c| {
                let mut i = inst.clone();
                i.n = Some(2);
                i.x = Some(c.x);
                i.poly = c.separable_poly.as_ref().map(|q| q.to_string());
                let detail = format!(
                    "X={} w_sep={} bound={} slack={} w={} w_witness={} exhaustive={}{}",
                    fmt_f(c.x),
                    c.w_sep.map(fmt_f).unwrap_or_else(|| "?".into()),
                    fmt_f(c.bound),
                    fmt_f(c.slack),
                    c.w.map(fmt_f).unwrap_or_else(|| "?".into()),
                    fmt_f(c.w_witness),
                    c.exhaustive,
                    c.note.as_ref().map(|s| format!(" note: {s}")).unwrap_or_default()
                );
                match (c.w, c.w_sep) {
                    (Some(w), Some(sep)) if c.exhaustive => {
                        let m = (c.bound + c.slack - sep).min(w - sep).min(w - c.w_witness + EXACT_SLACK);
                        let mut i = i.judge(m, detail);
                        // the gap must be strictly positive
                        if w - sep <= 0.0 {
                            i.pass = false;
                        }
                        i
                    }
                    _ => i.failed(detail),
                }
            });
        out.push(judged.unwrap_or_else(|e| inst.failed(format!("{}: {e}", error_kind(&e)))));
    }
    Ok(out)
}

fn lemur_suite(p: &SuiteParams, tol: &Tolerances) -> Result<Vec<Instance>> {
    let index = p.index.unwrap_or(2);
    let mut out = Vec::new();
    for spec in battery(p, liouville_six) {
        let xi = certified(&spec, tol)?;
        let args = [("index", index.to_string()), ("c", fmt_f(p.c))];
        let inst = construction_instance(Suite::Lemur, &spec, p, &format!("index={index} C={}", fmt_f(p.c)), &args);
        let judged = convergent_at(&xi, index).and_then(|c| lemur_pair(&xi, &c, p.c)).map(|l| {
            let m = (l.ratio.0 - l.determinant_lower + 1e-12)
                .min(l.ratio.0 - (1.0 - 2.0 * l.c))
                .min(l.dirichlet_upper - l.ratio.1);
            let mut i = inst.clone();
            i.poly = Some(format!("{} ; {}", l.p, l.r));
            i.judge(
                m,
                format!(
                    "R={} ratio=[{}, {}] determinant_lower={} dirichlet_upper={}",
                    l.r,
                    fmt_f(l.ratio.0),
                    fmt_f(l.ratio.1),
                    fmt_f(l.determinant_lower),
                    fmt_f(l.dirichlet_upper)
                ),
            )
        });
        out.push(judged.unwrap_or_else(|e| inst.failed(format!("{}: {e}", error_kind(&e)))));
    }
    Ok(out)
}

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dioph_core::bestapprox::{SearchClass, Strategy};
use dioph_core::constructions::{
    convergents, kappa_certificate, lemur_pair, principal_convergents, theorem_co_witness, theorem_liou_check,
};
use dioph_core::exponents::{estimate_limits, local_exponents, scan};
use dioph_core::intpoly::factor;
use dioph_core::realnum::Growth;
use dioph_core::{CertifiedReal, Error, IntPoly, NumberSpec, Tolerances};
use serde_json::Value;

use crate::output::{self, fmt_f};
use crate::suites::{self, Suite, SuiteParams};
use crate::{config, numfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Finite-height Diophantine exponents: search, constructions and verification suites")]
struct Cli {
    /// TOML file with slack_c, max_precision_bits, enum_budget, estimator_window.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `slack_c` from the config file.
    #[arg(long, global = true)]
    slack_c: Option<f64>,
    #[arg(long, global = true)]
    max_precision_bits: Option<u32>,
    #[arg(long, global = true)]
    enum_budget: Option<u64>,
    #[arg(long, global = true)]
    estimator_window: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local exponents over a geometric grid of height bounds.
    Scan(ScanArgs),
    /// All local exponents at one height bound.
    Best(BestArgs),
    /// Factor an integer polynomial given as constant-first coefficients.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explicit constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// The factor certificate bounding kappa at one height bound.
    Certificate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Target {
    /// Number spec file, or inline JSON.
    #[arg(long)]
    number: String,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Full,
    Offset,
    Lattice,
    Heuristic,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Full => Strategy::FullSweep,
            StrategyArg::Offset => Strategy::OffsetSweep,
            StrategyArg::Lattice => Strategy::Lattice,
            StrategyArg::Heuristic => Strategy::Heuristic,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    x_start: f64,
    #[arg(long)]
    x_end: f64,
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    /// Restricted classes to compute besides `all`.
    #[arg(long, value_delimiter = ',', default_value = "separable,irreducible")]
    classes: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to json for a `.json` output path, csv otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct BestArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    x: f64,
    #[arg(long, value_delimiter = ',', default_value = "separable,irreducible")]
    classes: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Write the spec of a lacunary series `sum base^{-a_k}`.
    Liouville {
        /// Growth ratio of the exponents, or `inf` for the factorial schedule.
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long, default_value_t = 1)]
        a1: u64,
        /// Truncate after this many terms (the result is then rational).
        #[arg(long)]
        terms: Option<u32>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Continued-fraction convergents with their quality.
    Convergents {
        #[arg(long)]
        number: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Keep only convergents with lambda_eff at least this.
        #[arg(long)]
        min_lambda: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The power-of-a-convergent witness for large kappa.
    Witness {
        #[arg(long)]
        number: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        /// 1-based position among the principal convergents.
        #[arg(long, default_value_t = 2)]
        index: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The determinant pair of linear forms at a principal convergent.
    Lemur {
        #[arg(long)]
        number: String,
        #[arg(long, default_value_t = 2)]
        index: usize,
        #[arg(long, default_value_t = 0.25)]
        c: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The separable-exponent check at a principal convergent.
    Liou {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    /// Repeat for several targets; defaults to the suite's battery.
    #[arg(long)]
    number: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Largest degree.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 2.0)]
    x_start: f64,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 1.25)]
    ratio: f64,
    /// A single height bound instead of a grid.
    #[arg(long)]
    x: Option<f64>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    index: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.25)]
    c: f64,
    /// Random samples in the sweeps.
    #[arg(long)]
    count: Option<usize>,
    /// Height bound in the sweeps.
    #[arg(long)]
    height: Option<i64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Replace the generated polynomials of a sweep; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    poly: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Usage(anyhow::Error),
    Verify(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
        Err(Failure::Verify(msg)) => {
            eprint!("{msg}");
            EXIT_VERIFY
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn target(spec_arg: &str, tol: &Tolerances) -> Result<CertifiedReal> {
    let spec = numfile::load(spec_arg)?;
    Ok(CertifiedReal::with_cap(spec, tol.max_precision_bits)?)
}

fn classes(names: &[String]) -> Result<Vec<SearchClass>> {
    names
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| Ok(s.parse::<SearchClass>()?))
        .collect()
}

/// Adds a smaller height bound to budget errors.
fn search_error(e: Error, n: usize, x: f64, tol: &Tolerances) -> anyhow::Error {
    if let Error::BudgetExceeded { .. } = e {
        let fit = ((tol.enum_budget as f64).powf(1.0 / n as f64) - 1.0) / 2.0;
        let suggest = fit.min(x / 2.0).floor().max(2.0);
        return anyhow::anyhow!("{e}; try a smaller height bound such as --x {suggest}");
    }
    e.into()
}

fn dispatch(cli: Cli) -> std::result::Result<(), Failure> {
    let mut tol = config::load(cli.config.as_deref())?;
    tol.slack_c = cli.slack_c.unwrap_or(tol.slack_c);
    tol.max_precision_bits = cli.max_precision_bits.unwrap_or(tol.max_precision_bits);
    tol.enum_budget = cli.enum_budget.unwrap_or(tol.enum_budget);
    tol.estimator_window = cli.estimator_window.unwrap_or(tol.estimator_window);
    config::check(&tol)?;
    match cli.command {
        Command::Scan(a) => cmd_scan(a, &tol)?,
        Command::Best(a) => cmd_best(a, &tol)?,
        Command::Factor { poly, out } => cmd_factor(&poly, out.as_deref())?,
        Command::Construct(c) => cmd_construct(c, &tol)?,
        Command::Certificate { target: t, n, x, out } => cmd_certificate(&t, n, x, out.as_deref(), &tol)?,
        Command::Verify(a) => return cmd_verify(a, &tol),
    }
    Ok(())
}

fn cmd_scan(a: ScanArgs, tol: &Tolerances) -> Result<()> {
    let xi = target(&a.target.number, tol)?;
    let cls = classes(&a.classes)?;
    let series = scan(&xi, a.n, a.x_start, a.x_end, a.ratio, &cls, a.target.strategy.into(), tol)?;
    let json = match a.format {
        Some(f) => f == Format::Json,
        None => a.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json")),
    };
    let text = if json {
        output::to_pretty(&output::scan_json(&series, tol))
    } else {
        let mut buf = Vec::new();
        output::write_scan_csv(&series, &mut buf)?;
        String::from_utf8(buf)?
    };
    emit(&text, a.out.as_deref())?;
    for row in series.rows.iter().filter(|r| r.record.is_err()) {
        if let Err(e) = &row.record {
            eprintln!("X={}: {e}", fmt_f(row.x));
        }
    }
    if let Ok(e) = estimate_limits(&series, tol.estimator_window) {
        eprintln!(
            "ESTIMATE over the last {} rows: w in [{}, {}], wstar in [{}, {}], kappa in [{}, {}]",
            e.rows_used,
            fmt_f(e.w_uniform),
            fmt_f(e.w_ordinary),
            fmt_f(e.wstar_uniform),
            fmt_f(e.wstar_ordinary),
            fmt_f(e.kappa_lower),
            fmt_f(e.kappa_upper)
        );
    }
    Ok(())
}

fn cmd_best(a: BestArgs, tol: &Tolerances) -> Result<()> {
    let xi = target(&a.target.number, tol)?;
    let cls = classes(&a.classes)?;
    let r = local_exponents(a.n, a.x, &xi, &cls, a.target.strategy.into(), tol)
        .map_err(|e| search_error(e, a.n, a.x, tol))?;
    emit(&output::to_pretty(&output::record_json(&r)), a.out.as_deref())
}

fn cmd_factor(poly: &str, out: Option<&Path>) -> Result<()> {
    let p: IntPoly = poly.parse()?;
    if p.is_zero() {
        bail!("cannot factor the zero polynomial");
    }
    let f = factor(&p);
    if f.expand() != p {
        bail!("factorization failed to reproduce the input");
    }
    emit(&output::to_pretty(&output::factorization_json(&f)), out)
}

fn principal(xi: &CertifiedReal, index: usize) -> Result<dioph_core::constructions::ConvergentRecord> {
    if index == 0 {
        bail!("convergent indices start at 1");
    }
    Ok(principal_convergents(xi, index, 2.0)?.remove(index - 1))
}

fn cmd_construct(c: Construct, tol: &Tolerances) -> Result<()> {
    match c {
        Construct::Liouville {
            lambda,
            base,
            a1,
            terms,
            shift,
            out,
        } => {
            let growth = match lambda.as_str() {
                "inf" | "infinity" => Growth::Factorial,
                s => Growth::Geometric(s.parse().with_context(|| format!("--lambda must be a number or inf, got '{s}'"))?),
            };
            let spec = NumberSpec::liouville(base, growth, a1, terms).shifted(shift);
            spec.validate()?;
            emit(&(numfile::to_json(&spec) + "\n"), out.as_deref())
        }
        Construct::Convergents {
            number,
            count,
            min_lambda,
            out,
        } => {
            let xi = target(&number, tol)?;
            let list = match min_lambda {
                Some(l) => principal_convergents(&xi, count, l)?,
                None => convergents(&xi, count)?,
            };
            let v = Value::Array(list.iter().map(output::convergent_json).collect());
            emit(&output::to_pretty(&v), out.as_deref())
        }
        Construct::Witness { number, n, k, index, out } => {
            let xi = target(&number, tol)?;
            let conv = principal(&xi, index)?;
            let w = theorem_co_witness(n, k, &conv, &xi)?;
            emit(&output::to_pretty(&output::witness_json(&w, numfile::to_value(xi.spec()))), out.as_deref())
        }
        Construct::Lemur { number, index, c, out } => {
            let xi = target(&number, tol)?;
            let conv = principal(&xi, index)?;
            let l = lemur_pair(&xi, &conv, c)?;
            emit(&output::to_pretty(&output::lemur_json(&l)), out.as_deref())
        }
        Construct::Liou {
            target: t,
            index,
            eps,
            out,
        } => {
            let xi = target(&t.number, tol)?;
            let conv = principal(&xi, index)?;
            let l = theorem_liou_check(&xi, &conv, eps, t.strategy.into(), tol)?;
            emit(&output::to_pretty(&output::liou_json(&l)), out.as_deref())
        }
    }
}

fn cmd_certificate(t: &Target, n: usize, x: f64, out: Option<&Path>, tol: &Tolerances) -> Result<()> {
    let xi = target(&t.number, tol)?;
    let c = kappa_certificate(n, x, &xi, t.strategy.into(), tol).map_err(|e| search_error(e, n, x, tol))?;
    emit(
        &output::to_pretty(&output::certificate_json(&c, numfile::to_value(xi.spec()), tol)),
        out,
    )
}

fn cmd_verify(a: VerifyArgs, tol: &Tolerances) -> std::result::Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let numbers = a
        .number
        .iter()
        .map(|s| numfile::load(s))
        .collect::<Result<Vec<_>>>()?;
    let polys = a
        .poly
        .iter()
        .map(|s| s.parse::<IntPoly>().map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;
    let params = SuiteParams {
        numbers,
        n: a.n,
        n_min: a.n_min,
        x_start: a.x_start,
        x_max: a.x_max,
        ratio: a.ratio,
        x: a.x,
        k: a.k,
        index: a.index,
        eps: a.eps,
        c: a.c,
        count: a.count,
        height: a.height,
        seed: a.seed,
        polys,
        strategy: a.strategy.into(),
    };
    let report = suites::run(suite, &params, tol)?;
    emit(&output::to_pretty(&report.to_json()), a.report.as_deref())?;
    let text = report.text();
    if report.all_pass() {
        eprint!("{text}");
        eprintln!("runtime {:.3}s", report.runtime.as_secs_f64());
        Ok(())
    } else {
        Err(Failure::Verify(text))
    }
}

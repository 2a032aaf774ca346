//! Tolerances from a TOML file, with the `DIO_MAX_PRECISION` override.
//!
//! ```toml
//! slack_c = 3.0
//! max_precision_bits = 65536
//! enum_budget = 100000000
//! estimator_window = 0.5
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use dioph_core::Tolerances;
use serde::Deserialize;

pub const PRECISION_ENV: &str = "DIO_MAX_PRECISION";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    slack_c: Option<f64>,
    max_precision_bits: Option<u32>,
    enum_budget: Option<u64>,
    estimator_window: Option<f64>,
}

pub fn parse(text: &str) -> Result<Tolerances> {
    let f: ConfigFile = toml::from_str(text).context("malformed config")?;
    let d = Tolerances::default();
    let t = Tolerances {
        slack_c: f.slack_c.unwrap_or(d.slack_c),
        max_precision_bits: f.max_precision_bits.unwrap_or(d.max_precision_bits),
        enum_budget: f.enum_budget.unwrap_or(d.enum_budget),
        estimator_window: f.estimator_window.unwrap_or(d.estimator_window),
    };
    check(&t)?;
    Ok(t)
}

pub fn check(t: &Tolerances) -> Result<()> {
    if !(t.slack_c.is_finite() && t.slack_c >= 0.0) {
        bail!("slack_c must be a finite non-negative number");
    }
    if t.max_precision_bits < 64 {
        bail!("max_precision_bits must be at least 64");
    }
    if t.enum_budget == 0 {
        bail!("enum_budget must be positive");
    }
    if !(t.estimator_window > 0.0 && t.estimator_window <= 1.0) {
        bail!("estimator_window must lie in (0, 1]");
    }
    Ok(())
}

/// Defaults, then the file if given, then the environment.
pub fn load(path: Option<&Path>) -> Result<Tolerances> {
    let mut t = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            parse(&text).with_context(|| format!("in {}", p.display()))?
        }
        None => Tolerances::default(),
    };
    if let Ok(v) = std::env::var(PRECISION_ENV) {
        t.max_precision_bits = v
            .trim()
            .parse()
            .with_context(|| format!("{PRECISION_ENV} must be a bit count, got '{v}'"))?;
        check(&t)?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let t = parse("slack_c = 2.5\nenum_budget = 1000").unwrap();
        assert_eq!(t.slack_c, 2.5);
        assert_eq!(t.enum_budget, 1000);
        assert_eq!(t.max_precision_bits, Tolerances::default().max_precision_bits);
    }

    #[test]
    fn rejects_nonsense() {
        assert!(parse("slack_c = -1.0").is_err());
        assert!(parse("estimator_window = 0.0").is_err());
        assert!(parse("precision = 3").is_err());
    }
}

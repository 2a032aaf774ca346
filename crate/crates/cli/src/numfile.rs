//! JSON form of a target number.
//!
//! ```json
//! {"kind": "liouville", "base": 2, "lambda": 6, "a1": 1, "terms": null, "shift": 0}
//! ```
//!
//! `lambda` is a number or the string `"inf"` for the factorial schedule.
//! Rationals use `num`/`den`, continued fractions `prefix`/`period`, and
//! classical constants `constant` (`"e"` or `"ln2"`).

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dioph_core::realnum::{Constant, Growth, NumberKind};
use dioph_core::NumberSpec;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NumberFile {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a1: Option<u64>,
    #[serde(default, skip_serializing_if = "is_liouville_default")]
    terms: Option<Option<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    num: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    den: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<String>,
    #[serde(default)]
    shift: i64,
}

fn is_liouville_default(t: &Option<Option<u32>>) -> bool {
    t.is_none()
}

fn big_value(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::from(i),
        Err(_) => Value::from(v.to_string()),
    }
}

fn parse_big(v: &Value, field: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
        Value::String(s) => s.trim().parse().map_err(|_| anyhow!("'{field}' is not an integer: {s}")),
        _ => bail!("'{field}' must be an integer"),
    }
}

fn parse_growth(v: &Value) -> Result<Growth> {
    match v {
        Value::Number(n) => Ok(Growth::Geometric(n.as_f64().unwrap())),
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity" | "factorial") => Ok(Growth::Factorial),
        _ => bail!("'lambda' must be a number or \"inf\""),
    }
}

fn to_file(spec: &NumberSpec) -> NumberFile {
    let mut f = NumberFile {
        shift: spec.shift,
        ..Default::default()
    };
    match &spec.kind {
        NumberKind::Rational { num, den } => {
            f.kind = "rational".into();
            f.num = Some(big_value(num));
            f.den = Some(big_value(den));
        }
        NumberKind::LiouvilleSeries { base, growth, a1, terms } => {
            f.kind = "liouville".into();
            f.base = Some(*base);
            f.lambda = Some(match growth {
                Growth::Geometric(l) => serde_json::Number::from_f64(*l).map(Value::Number).unwrap_or(Value::Null),
                Growth::Factorial => Value::from("inf"),
            });
            f.a1 = Some(*a1);
            f.terms = Some(*terms);
        }
        NumberKind::ContinuedFraction { prefix, period } => {
            f.kind = "continued_fraction".into();
            f.prefix = Some(prefix.clone());
            f.period = Some(period.clone());
        }
        NumberKind::Classical(c) => {
            f.kind = "classical".into();
            f.constant = Some(
                match c {
                    Constant::E => "e",
                    Constant::Ln2 => "ln2",
                }
                .into(),
            );
        }
    }
    f
}

fn from_file(f: NumberFile) -> Result<NumberSpec> {
    let spec = match f.kind.as_str() {
        "rational" => {
            let num = parse_big(f.num.as_ref().context("rational needs 'num'")?, "num")?;
            let den = match &f.den {
                Some(d) => parse_big(d, "den")?,
                None => BigInt::from(1),
            };
            NumberSpec {
                kind: NumberKind::Rational { num, den },
                shift: 0,
            }
        }
        "liouville" | "liouville_series" => NumberSpec::liouville(
            f.base.unwrap_or(2),
            parse_growth(f.lambda.as_ref().context("liouville needs 'lambda'")?)?,
            f.a1.unwrap_or(1),
            f.terms.flatten(),
        ),
        "continued_fraction" => NumberSpec::continued_fraction(
            f.prefix.unwrap_or_default(),
            f.period.context("continued_fraction needs 'period'")?,
        ),
        "classical" => NumberSpec::classical(match f.constant.as_deref() {
            Some("e") => Constant::E,
            Some("ln2") => Constant::Ln2,
            Some(other) => bail!("unknown constant '{other}'"),
            None => bail!("classical needs 'constant'"),
        }),
        other => bail!("unknown number kind '{other}'"),
    }
    .shifted(f.shift);
    spec.validate()?;
    Ok(spec)
}

pub fn to_json(spec: &NumberSpec) -> String {
    serde_json::to_string(&to_file(spec)).expect("number files always serialize")
}

pub fn to_value(spec: &NumberSpec) -> Value {
    serde_json::to_value(to_file(spec)).expect("number files always serialize")
}

pub fn parse(text: &str) -> Result<NumberSpec> {
    let f: NumberFile = serde_json::from_str(text).context("malformed number specification")?;
    from_file(f)
}

/// Reads a spec from a file, or parses the argument itself when it starts
/// with `{`.
pub fn load(arg: &str) -> Result<NumberSpec> {
    if arg.trim_start().starts_with('{') {
        return parse(arg);
    }
    let text = std::fs::read_to_string(Path::new(arg)).with_context(|| format!("cannot read {arg}"))?;
    parse(&text).with_context(|| format!("in {arg}"))
}

/// Short human-readable name used in report keys.
pub fn label(spec: &NumberSpec) -> String {
    let body = match &spec.kind {
        NumberKind::Rational { num, den } => format!("{num}/{den}"),
        NumberKind::LiouvilleSeries { base, growth, a1, terms } => {
            let g = match growth {
                Growth::Geometric(l) => format!("{l}"),
                Growth::Factorial => "inf".into(),
            };
            let t = terms.map(|t| format!(",terms={t}")).unwrap_or_default();
            format!("liouville(base={base},lambda={g},a1={a1}{t})")
        }
        NumberKind::ContinuedFraction { prefix, period } => format!("cf({prefix:?};{period:?})"),
        NumberKind::Classical(Constant::E) => "e".into(),
        NumberKind::Classical(Constant::Ln2) => "ln2".into(),
    };
    match spec.shift {
        0 => body,
        s if s > 0 => format!("{body}+{s}"),
        s => format!("{body}{s}"),
    }
}

/// `e - 2`, `ln 2`, and the Liouville series with ratio 4 and factorial growth.
pub fn standard_battery() -> Vec<NumberSpec> {
    vec![
        NumberSpec::e_minus_2(),
        NumberSpec::classical(Constant::Ln2),
        NumberSpec::liouville(2, Growth::Geometric(4.0), 1, None),
        NumberSpec::liouville(2, Growth::Factorial, 1, None),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in standard_battery()
            .into_iter()
            .chain([NumberSpec::rational(2, 7).shifted(3), NumberSpec::continued_fraction(vec![0], vec![1])])
        {
            let back = parse(&to_json(&s)).unwrap();
            assert_eq!(back, s, "{}", to_json(&s));
        }
    }

    #[test]
    fn documented_fields() {
        let s = parse(r#"{"kind":"liouville","base":2,"lambda":6,"a1":1,"terms":10,"shift":0}"#).unwrap();
        assert_eq!(s, NumberSpec::liouville(2, Growth::Geometric(6.0), 1, Some(10)));
        let s = parse(r#"{"kind":"liouville","lambda":"inf"}"#).unwrap();
        assert_eq!(s, NumberSpec::liouville(2, Growth::Factorial, 1, None));
        assert_eq!(label(&NumberSpec::e_minus_2()), "e-2");
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(parse(r#"{"kind":"rational","num":1,"den":0}"#).is_err());
        assert!(parse(r#"{"kind":"liouville","lambda":0.5}"#).is_err());
        assert!(parse(r#"{"kind":"pi"}"#).is_err());
        assert!(parse(r#"{"kind":"rational","num":1,"colour":3}"#).is_err());
        assert!(parse("not json").is_err());
    }
}

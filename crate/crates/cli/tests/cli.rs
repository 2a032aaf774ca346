use std::path::Path;
use std::process::{Command, Output};

use dioph::numfile;
use dioph_core::realnum::Growth;
use dioph_core::NumberSpec;
use serde_json::Value;
use tempfile::TempDir;

fn dioph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .current_dir(dir)
        .env_remove("DIO_MAX_PRECISION")
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn workspace() -> TempDir {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("e2.json"), numfile::to_json(&NumberSpec::e_minus_2())).unwrap();
    let l4 = NumberSpec::liouville(2, Growth::Geometric(4.0), 1, None);
    std::fs::write(d.path().join("liouville4.json"), numfile::to_json(&l4)).unwrap();
    d
}

#[test]
fn scan_writes_one_row_per_grid_point() {
    let d = workspace();
    let o = dioph(
        d.path(),
        &["scan", "--number", "e2.json", "--n", "2", "--x-start", "2", "--x-end", "512", "--ratio", "2", "--out", "scan.csv"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(d.path().join("scan.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,X,w,wstar,kappa"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.starts_with("2,")));
    assert!(stderr(&o).contains("ESTIMATE"));
}

#[test]
fn kappa_nonneg_passes_on_the_liouville_target() {
    let d = workspace();
    let o = dioph(
        d.path(),
        &["verify", "--suite", "kappa-nonneg", "--number", "liouville4.json", "--n", "3", "--x-max", "200", "--report", "r.json"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_file(&d.path().join("r.json"));
    assert_eq!(r["schema"], "suite-report/1");
    assert_eq!(r["failed"], 0);
    assert!(r["instance_count"].as_u64().unwrap() > 0);
}

#[test]
fn truncated_series_gives_a_large_kappa_witness() {
    let d = workspace();
    let o = dioph(d.path(), &["construct", "liouville", "--lambda", "6", "--terms", "10", "--out", "xi.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = dioph(
        d.path(),
        &["verify", "--suite", "thm-co", "--n", "2", "--k", "2", "--number", "xi.json", "--report", "r.json"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_file(&d.path().join("r.json"));
    let detail = r["instances"][0]["detail"].as_str().unwrap();
    let lower: f64 = detail
        .split_whitespace()
        .find_map(|t| t.strip_prefix("kappa_lower="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(lower > 1.0, "{detail}");
    assert!(detail.contains("exceeds_n_minus_1=true"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let d = workspace();
    let scan = ["scan", "--number", "e2.json", "--n", "3", "--x-end", "100", "--out", "a.json"];
    assert_eq!(code(&dioph(d.path(), &scan)), 0);
    std::fs::rename(d.path().join("a.json"), d.path().join("b.json")).unwrap();
    assert_eq!(code(&dioph(d.path(), &scan)), 0);
    let a = std::fs::read(d.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.path().join("b.json")).unwrap());

    let verify = |out: &str| {
        dioph(d.path(), &["verify", "--suite", "feldman", "--count", "50", "--report", out]);
        std::fs::read(d.path().join(out)).unwrap()
    };
    assert_eq!(verify("f1.json"), verify("f2.json"));
}

#[test]
fn failures_exit_2_and_replay_from_the_report() {
    let d = workspace();
    let o = dioph(
        d.path(),
        &["--slack-c", "0", "verify", "--suite", "kappa-nonneg", "--number", "e2.json", "--n", "2", "--x-max", "20", "--report", "r.json"],
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("replay: dioph verify"));
    let r = json_file(&d.path().join("r.json"));
    assert_eq!(r["tolerances"]["slack_c"], 0.0);
    let failed: Vec<&Value> = r["instances"].as_array().unwrap().iter().filter(|i| i["pass"] == false).collect();
    assert!(!failed.is_empty());
    for f in failed {
        let mut args: Vec<String> = f["replay"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect();
        args.extend(["--report".into(), "replay.json".into()]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(code(&dioph(d.path(), &refs)), 2);
        let rr = json_file(&d.path().join("replay.json"));
        assert_eq!(rr["instance_count"], 1);
        let inst = &rr["instances"][0];
        assert_eq!(inst["key"], f["key"]);
        assert_eq!(inst["slack"], f["slack"]);
        assert_eq!(inst["poly"], f["poly"]);
    }
}

#[test]
fn usage_errors_exit_1() {
    let d = workspace();
    std::fs::write(d.path().join("bad.json"), r#"{"kind":"bogus"}"#).unwrap();
    let o = dioph(d.path(), &["best", "--number", "bad.json", "--n", "1", "--x", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("unknown number kind"));

    std::fs::write(d.path().join("extra.json"), r#"{"kind":"rational","num":1,"den":3,"colour":1}"#).unwrap();
    assert_eq!(code(&dioph(d.path(), &["best", "--number", "extra.json", "--n", "1", "--x", "5"])), 1);
    assert_eq!(code(&dioph(d.path(), &["best", "--number", "missing.json", "--n", "1", "--x", "5"])), 1);
    assert_eq!(code(&dioph(d.path(), &["verify", "--suite", "no-such-suite"])), 1);
    assert_eq!(code(&dioph(d.path(), &["scan", "--bogus"])), 1);
    assert_eq!(code(&dioph(d.path(), &["--help"])), 0);
}

#[test]
fn budget_errors_suggest_a_smaller_bound() {
    let d = workspace();
    let o = dioph(d.path(), &["--enum-budget", "10", "best", "--number", "e2.json", "--n", "3", "--x", "100"]);
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("budget") && e.contains("--x"), "{e}");
}

#[test]
fn precision_cap_comes_from_the_environment() {
    let d = workspace();
    let run = |bits: &str| {
        Command::new(env!("CARGO_BIN_EXE_dioph"))
            .current_dir(d.path())
            .env("DIO_MAX_PRECISION", bits)
            .args(["verify", "--suite", "dirichlet-floor", "--number", "e2.json", "--n", "1", "--x-max", "10", "--report", "r.json"])
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("4096")), 0);
    assert_eq!(json_file(&d.path().join("r.json"))["tolerances"]["max_precision_bits"], 4096);
    let o = run("12");
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("at least 64"));
    assert_eq!(code(&run("lots")), 1);
}

#[test]
fn factor_prints_the_factorization() {
    let d = workspace();
    let o = dioph(d.path(), &["factor", "--poly", "1,0,-3,2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["content"], 1);
    assert_eq!(v["sign"], 1);
    let f: Vec<(Vec<i64>, u64)> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            let c = f["coeffs"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect();
            (c, f["mult"].as_u64().unwrap())
        })
        .collect();
    assert_eq!(f, vec![(vec![-1, 1], 2), (vec![1, 2], 1)]);
    assert_eq!(code(&dioph(d.path(), &["factor", "--poly", "1,x"])), 1);
}

#[test]
fn config_file_sets_tolerances() {
    let d = workspace();
    std::fs::write(d.path().join("tight.toml"), "slack_c = 0.0\n").unwrap();
    let args = ["verify", "--suite", "kappa-nonneg", "--number", "e2.json", "--n", "2", "--x-max", "20"];
    assert_eq!(code(&dioph(d.path(), &args)), 0);
    let mut with_cfg = vec!["--config", "tight.toml"];
    with_cfg.extend(args);
    assert_eq!(code(&dioph(d.path(), &with_cfg)), 2);
    std::fs::write(d.path().join("typo.toml"), "slack = 1.0\n").unwrap();
    assert_eq!(code(&dioph(d.path(), &["--config", "typo.toml", "factor", "--poly", "1,1"])), 1);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lipop::cli::{Failure, EXIT_EVAL, EXIT_INPUT, EXIT_VERIFY};
use lipop::scenario::{corpus_json, golden_corpus, Scenario};
use lipop::{AnalyticScalar, Error};
use serde_json::Value;

fn lipop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lipop")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn scenario_file(dir: &Path, s: &Scenario) -> PathBuf {
    write(dir, &format!("{}.json", s.id), &serde_json::to_string(s).unwrap())
}

fn analyze_json(path: &Path) -> Value {
    let out = lipop(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_verdicts_as_data() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = golden_corpus();
    let id = analyze_json(&scenario_file(dir.path(), &corpus[0]));
    assert_eq!(id["id"], "identity");
    assert_eq!(id["bounded_verdict"], "bounded");
    assert_eq!(id["compact_verdict"], "not_compact");
    assert!((id["q_value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(id["lower_bound"]["value"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!(id["q_profile"].as_array().unwrap().len() == 20);

    let half = corpus.iter().find(|s| s.id == "half").unwrap();
    assert_eq!(analyze_json(&scenario_file(dir.path(), half))["compact_verdict"], "compact");

    let unbounded = Scenario::scalar("up", AnalyticScalar::one(), AnalyticScalar::identity(), 0.25, 0.75);
    let r = analyze_json(&scenario_file(dir.path(), &unbounded));
    assert_eq!(r["bounded_verdict"], "unbounded");

    let text = lipop(&["analyze", scenario_file(dir.path(), &corpus[0]).to_str().unwrap()]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("NotCompact"));
}

#[test]
fn analyze_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario_file(dir.path(), &golden_corpus()[5]);
    let a = lipop(&["analyze", p.to_str().unwrap(), "--json"]);
    let b = lipop(&["analyze", p.to_str().unwrap(), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{");
    let mut s = golden_corpus()[0].clone();
    s.alpha = 1.5;
    let invalid = scenario_file(dir.path(), &s);
    for args in [
        vec!["analyze", bad.to_str().unwrap()],
        vec!["analyze", invalid.to_str().unwrap()],
        vec!["analyze", "/nonexistent/scenario.json"],
        vec!["norm", bad.to_str().unwrap(), "--lip1"],
        vec!["sweep", bad.to_str().unwrap(), "/tmp/never.csv"],
        vec!["frobnicate"],
    ] {
        let out = lipop(&args);
        assert_eq!(out.status.code(), Some(EXIT_INPUT), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(Failure::Eval(Error::Evaluation { z: lipop::C64::new(0.0, 0.0) }).code(), EXIT_EVAL);
    assert_eq!(Failure::Verify(String::new()).code(), EXIT_VERIFY);
}

fn norm_value(path: &Path, flag: &[&str]) -> f64 {
    let mut args = vec!["norm", path.to_str().unwrap(), "--json"];
    args.extend_from_slice(flag);
    let out = lipop(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["value"].as_f64().unwrap()
}

#[test]
fn norm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", r#"{"kind":"poly","coeffs":[[0,0],[1,0]]}"#);
    let z2 = write(dir.path(), "z2.json", r#"{"kind":"poly","coeffs":[[0,0],[0,0],[1,0]]}"#);
    let c = write(
        dir.path(),
        "c.json",
        r#"{"space":{"dim":2,"norm":"l2"},"components":[{"kind":"poly","coeffs":[[0,0]]},{"kind":"poly","coeffs":[[3,0]]}]}"#,
    );
    assert!((norm_value(&z, &["--alpha", "0.5"]) - 1.0).abs() < 1e-9);
    assert!((norm_value(&z2, &["--alpha", "0.5"]) - 1.0).abs() < 1e-6);
    assert!((norm_value(&c, &["--alpha", "0.5"]) - 3.0).abs() < 1e-12);
    assert!((norm_value(&z2, &["--lip1"]) - 3.0).abs() < 1e-5);
    assert!((norm_value(&z, &["--nu", "1"]) - 2.0 / (3.0 * 3f64.sqrt())).abs() < 1e-9);
    let out = lipop(&["norm", z.to_str().unwrap(), "--alpha", "0.5"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("witness"));
    let out = lipop(&["norm", z.to_str().unwrap(), "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn verify_suites() {
    let out = lipop(&["verify", "--suite", "identities"]);
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_lipop"))
        .args(["verify", "--suite", "identities"])
        .env("LIPOP_TOL_SCALE", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_VERIFY));
    assert!(String::from_utf8_lossy(&out.stderr).contains("instance"));

    let out = lipop(&["verify", "--suite", "equivalence"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("envelope L/C in [0.864147, 1.053829]"));
}

#[test]
fn sweep_reproduces_golden_csv() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/golden_corpus.json");
    let out = dir.path().join("sweep.csv");
    let r = lipop(&["sweep", corpus.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let golden = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/golden_sweep.csv")).unwrap();
    let got = std::fs::read_to_string(&out).unwrap();
    assert_eq!(got.lines().count(), 31);
    assert_eq!(got, golden);
}

#[test]
fn sweep_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", "[]");
    let out = dir.path().join("empty.csv");
    assert_eq!(lipop(&["sweep", empty.to_str().unwrap(), out.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "scenario_id,alpha,beta,q,psi_norm,C,L,ratio,bounded_verdict,compact_verdict\n"
    );

    let up = Scenario::scalar("up", AnalyticScalar::one(), AnalyticScalar::identity(), 0.25, 0.75);
    let one = write(dir.path(), "up.json", &corpus_json(&[up]).unwrap());
    let out = dir.path().join("up.csv");
    assert_eq!(lipop(&["sweep", one.to_str().unwrap(), out.to_str().unwrap()]).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "up");
    assert_eq!(row[7], "");
    assert_eq!(row[8], "unbounded");
}

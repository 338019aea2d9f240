use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lorentz-gh"));
    cmd.arg("--threads").arg("1");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn chains(dir: &TempDir) -> (PathBuf, PathBuf) {
    (
        write(dir, "chain2.json", r#"{"n": 2, "labels": ["a", "b"], "d": [[0, 1], [0, 0]]}"#),
        write(dir, "chain125.json", r#"{"n": 2, "labels": ["a", "b"], "d": [[0, 1.25], [0, 0]]}"#),
    )
}

#[test]
fn validate_chain() {
    let dir = TempDir::new().unwrap();
    let (a, _) = chains(&dir);
    let out = run(&["validate", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({"valid": true}));
}

#[test]
fn invalid_causet_exits_one_with_violations() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", r#"{"n": 3, "d": [[0, 1, 1], [0, 0, 1], [0, 0, 0]]}"#);
    let out = run(&["validate", s(&p)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["kind"], "reverse-triangle");
}

#[test]
fn malformed_input_exits_two_naming_the_field() {
    let out = run_stdin(&["validate", "-"], br#"{"n": 2, "d": [[0, 1], [0]]}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`d`"));
    let out = run_stdin(&["validate", "-"], b"{not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
    assert_eq!(run(&["validate", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["net", "x.json"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "torus", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn exact_gh_of_two_chains() {
    let dir = TempDir::new().unwrap();
    let (a, b) = chains(&dir);
    let out = run(&["gh", s(&a), s(&b), "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exact"], 0.25);
    assert_eq!(v["method"], "exact");
    let bounds = json(&run(&["gh", s(&a), s(&b)]));
    assert!(bounds.get("exact").is_none());
    assert!(bounds["lower"].as_f64().unwrap() <= 0.25 && bounds["upper"].as_f64().unwrap() >= 0.25);
}

#[test]
fn sample_pipes_into_validate() {
    let sample = run(&["sample", "diamond", "--n", "9", "--mode", "grid"]);
    assert_eq!(sample.status.code(), Some(0));
    let v = json(&sample);
    assert_eq!(v["n"], 8);
    assert_eq!(v["meta"]["sample"]["mode"], "grid");
    let out = run_stdin(&["validate", "-"], &sample.stdout);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn limit_of_one_file_round_trips() {
    let sample = run(&["sample", "diamond", "--n", "12", "--seed", "3"]);
    let mut v = json(&sample);
    v.as_object_mut().unwrap().remove("meta");
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "s.json", &v.to_string());
    let out = run(&["limit", s(&p), "--order", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), v);
}

#[test]
fn gamma_tau_net_chain_outputs() {
    let dir = TempDir::new().unwrap();
    let (a, _) = chains(&dir);
    let g = json(&run(&["gamma", s(&a)]));
    assert_eq!(g["kind"], "gamma");
    assert_eq!(g["d"][0][1], 1.0);
    assert_eq!(json(&run(&["gamma", s(&a), "--noldus"]))["d"], g["d"]);
    let tau = json(&run(&["tau", s(&a)]));
    assert!(tau["a"].as_f64().unwrap() < tau["b"].as_f64().unwrap());
    let net = json(&run(&["net", s(&a), "--eps", "2"]));
    assert_eq!(net["members"], serde_json::json!([0]));
    assert_eq!(net["covering_radius"], 1.0);
    let chain = json(&run(&["chain", s(&a), "a", "b"]));
    assert_eq!(chain["labels"], serde_json::json!(["a", "b"]));
    assert_eq!(run(&["chain", s(&a), "b", "a"]).status.code(), Some(1));
}

#[test]
fn rationalize_then_validate_exactly() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c.json", r#"{"n": 3, "d": [[0, 0.3, 0.71], [0, 0, 0.4], [0, 0, 0]]}"#);
    let out = run(&["rationalize", s(&p), "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rational"], true);
    let checked = run_stdin(&["validate", "-", "--exact"], &out.stdout);
    assert_eq!(checked.status.code(), Some(0));
    // The plain float file has no exact payload.
    assert_eq!(run(&["validate", s(&p), "--exact"]).status.code(), Some(1));
}

#[test]
fn curvature_summary_and_unsupported_model() {
    let sample = run(&["sample", "diamond", "--n", "40", "--seed", "1"]);
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "s.json", &String::from_utf8(sample.stdout).unwrap());
    let v = json(&run(&["curvature", s(&p), "--bound", "upper", "--summary"]));
    assert_eq!(v["bound"], "upper");
    assert_eq!(v["triangles"], serde_json::json!([]));
    assert_eq!(v["passed"], v["violated"] == 0);
    assert_eq!(run(&["curvature", s(&p), "--k", "1"]).status.code(), Some(1));
}

#[test]
fn experiment_csv_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"kind": "convergence", "ladder": [25, 50, 100, 200], "seed": 7}"#);
    let out1 = dir.path().join("a.csv");
    let first = run(&["experiment", s(&cfg), "--out", s(&out1)]);
    assert_eq!(first.status.code(), Some(0));
    let second = run(&["experiment", s(&cfg)]);
    let text = std::fs::read_to_string(&out1).unwrap();
    assert_eq!(text.as_bytes(), second.stdout.as_slice());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,gh_upper,net_size_at_eps,runtime_ms");
    assert_eq!(lines.len(), 5);
    let ups: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(ups.windows(2).all(|w| w[1] < w[0]), "{ups:?}");
}

#[test]
fn experiment_variants() {
    let dir = TempDir::new().unwrap();
    let single = write(&dir, "one.json", r#"{"ladder": [25]}"#);
    let out = run(&["experiment", s(&single)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);

    let scaling = write(&dir, "scaling.json", r#"{"kind": "gamma-scaling"}"#);
    let text = String::from_utf8(run(&["experiment", s(&scaling)]).stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("radius,gamma,exponent"));
    for line in lines {
        let exponent: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((exponent - 0.5).abs() <= 0.05);
    }

    let bad = write(&dir, "bad.json", r#"{"ladder": [50, 25]}"#);
    assert_eq!(run(&["experiment", s(&bad)]).status.code(), Some(1));
    let malformed = write(&dir, "malformed.json", r#"{"ladder": "many"}"#);
    assert_eq!(run(&["experiment", s(&malformed)]).status.code(), Some(2));
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lorentz-gh"))
        .env("LORENTZ_GH_THREADS", "2")
        .args(["sample", "diamond", "--n", "4", "--mode", "grid"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_lorentz-gh"))
        .env("LORENTZ_GH_THREADS", "many")
        .args(["sample", "diamond", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

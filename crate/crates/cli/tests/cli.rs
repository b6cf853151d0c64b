use std::path::Path;
use std::process::{Command, Output};

use algebroid_forge::algebroid::{construct_blambda, AlgebroidDocument};
use algebroid_forge::liealg::CartanType;
use algebroid_forge::ExactScalar;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_algebroid-forge"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_valid_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let out = run(&["construct", "--type", "A1", "--lambda", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = read(&path);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["dims"], serde_json::json!([3, 5]));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["seed"], 42);
}

#[test]
fn construct_invalid_bundle_still_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let out = run(&["construct", "--type", "A", "--rank", "1", "--lambda", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let doc = read(&path);
    assert_eq!(doc["valid"], false);
    let witnesses = doc["criterion"]["violations"].as_array().unwrap();
    assert!(witnesses.iter().any(|w| w["g"] == "f" && w["g_prime"] == "h" && w["a"] == "a0" && w["residual"] == "2*a1"));
}

#[test]
fn construct_e8_theta_is_invalid() {
    let out = run(&["construct", "--type", "E8", "--lambda", "theta", "--format", "text"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid: false"));
}

#[test]
fn construct_rejects_bad_input() {
    assert_eq!(run(&["construct", "--type", "A1", "--lambda", "x"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--type", "A1", "--lambda", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--type", "A"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--type", "G2", "--lambda", "1,0"]).status.code(), Some(2));
}

#[test]
fn check_valid_perturbed_and_unreadable() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    run(&["construct", "--type", "A1", "--lambda", "1", "--out", good.to_str().unwrap()]);
    let out = run(&["check", good.to_str().unwrap(), "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["report"]["passes"], true);
    assert_eq!(rep["report"]["leibniz"]["verdict"], "simple");

    // <e, f> = 2 breaks the pairing identities
    let mut bundle = construct_blambda(CartanType::A(1), &[1]).unwrap();
    bundle.pairing.set(0, 1, [(bundle.unit, ExactScalar::from_int(2))].into_iter().collect());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&AlgebroidDocument::new(bundle, None)).unwrap()).unwrap();
    let out = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json(&out);
    let failing: Vec<&Value> =
        rep["report"]["axioms"]["checks"].as_array().unwrap().iter().filter(|c| c["violations"] != 0).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c["witness"].is_array()));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(run(&["check", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn leibniz_suite_reports_verdict() {
    let out = run(&["analyze-leibniz", "--type", "A1", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["report"]["leib_dim"], 2);
    assert_eq!(rep["report"]["leib_equals_image_d"], true);
    assert_eq!(rep["report"]["levi"], true);
}

#[test]
fn sl2_table_for_lambda_one() {
    let out = run(&["analyze-sl2", "--type", "A1", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["report"]["ker_d_is_unit_line"], true);
    assert!(rep["report"]["table"].as_array().unwrap().iter().all(|l| l["holds"] == true));
}

#[test]
fn build_va_reports_quotient_and_checks() {
    let out = run(&["build-va", "--type", "A1", "--degree", "3", "--quotient", "etheta", "--samples", "100", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["config"]["seed"], 42);
    let r = &rep["report"];
    assert_eq!(r["enveloping"]["dims"], serde_json::json!([3, 5, 15, 30]));
    assert_eq!(r["quotient"]["dims"], serde_json::json!([3, 5, 10, 15]));
    assert_eq!(r["quotient"]["ideal_misses_a"], true);
    assert_eq!(r["quotient"]["ideal_misses_b"], true);
    assert_eq!(r["quotient"]["theta_square_vanishes"], true);
    for k in ["commutator", "iterate", "skew_symmetry", "translation"] {
        assert_eq!(r["borcherds"][k]["violations"], 0, "{k}");
    }
    assert_eq!(r["c2"]["covered_by_classes"], true);
}

#[test]
fn build_va_degree_zero_reports_floor_only() {
    let out = run(&["build-va", "--type", "A1", "--degree", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["report"];
    assert_eq!(r["enveloping"]["dims"], serde_json::json!([3]));
    assert!(r.get("quotient").is_none() && r.get("borcherds").is_none() && r.get("c2").is_none());
}

#[test]
fn build_va_budget_exhaustion_exits_four() {
    let out = run(&["build-va", "--type", "A1", "--degree", "3", "--max-rounds", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn conformal_ranks_and_planted_failure() {
    let rank = |args: &[&str]| {
        let mut all = vec!["conformal", "--type", "A1"];
        all.extend_from_slice(args);
        let out = run(&all);
        (out.status.code(), json(&out)["report"]["report"]["measured_rank"].clone())
    };
    assert_eq!(rank(&[]), (Some(0), Value::from("1")));
    assert_eq!(rank(&["--h-theta", "1/2"]), (Some(0), Value::from("-5")));
    assert_eq!(rank(&["--h-theta", "1/4", "--shift", "a0"]), (Some(0), Value::from("-1/2")));
    assert_eq!(rank(&["--h-theta", "1/2", "--shift", "a0"]).0, Some(1));
    assert_eq!(run(&["conformal", "--type", "A1", "--shift", "zz"]).status.code(), Some(2));
}

#[test]
fn borcherds_command_echoes_seed() {
    let out = run(&["borcherds", "--type", "A1", "--samples", "30", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["config"]["seed"], 9);
    assert_eq!(rep["report"]["seed"], 9);
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let args = ["build-va", "--type", "A1", "--degree", "2", "--samples", "40", "--seed", "5"];
    let a = run_env(&args, &[("ALGEBROID_FORGE_THREADS", "1")]);
    let b = run_env(&args, &[("ALGEBROID_FORGE_THREADS", "4")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = run_env(&args, &[("ALGEBROID_FORGE_THREADS", "zero")]);
    assert_eq!(bad.status.code(), Some(2));
}

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prorigid")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn invalid_presets_exit_two() {
    for args in [
        vec!["witness", "method-b", "--p", "5", "--q", "5"],
        vec!["witness", "method-b", "--p", "3", "--q", "7"],
        vec!["witness", "method-a", "--n", "4", "--p", "5", "--q", "7", "--order", "4"],
        vec!["witness", "s16", "--p", "5"],
        vec!["witness", "method-c", "--inject-fault", "w0-sign"],
        vec!["witness", "s16", "--samples", "0"],
        vec!["witness", "method-a", "--bogus"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn non_split_prime_reports_evidence() {
    let out = run(&["witness", "method-c", "--d", "2", "--p", "5", "--q", "7"]);
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("5 is inert"), "{stderr}");
}

#[test]
fn search_primes_examples() {
    let primes = |args: &[&str]| stdout_json(&run(args))["primes"].clone();
    assert_eq!(primes(&["search-primes", "--d", "2", "--count", "3"]), serde_json::json!([7, 17, 23]));
    assert_eq!(primes(&["search-primes", "--full-center", "4", "--count", "2"]), serde_json::json!([5, 13]));
    assert_eq!(
        primes(&["search-primes", "--d", "2", "--count", "2", "--exclude", "7,23"]),
        serde_json::json!([17, 31])
    );
    assert_eq!(primes(&["search-primes", "--congruence", "3:1", "--count", "3"]), serde_json::json!([7, 13, 19]));
    assert_eq!(code(&run(&["search-primes", "--d", "2", "--count", "0"])), 2);
    assert_eq!(code(&run(&["search-primes", "--congruence", "4:2", "--count", "1"])), 2);
    assert_eq!(code(&run(&["search-primes", "--congruence", "x", "--count", "1"])), 2);
}

#[test]
fn saved_bundles_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let p = path.to_str().unwrap();
    let out = run(&["witness", "method-b", "--samples", "200", "--output", p]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());

    let out = run(&["verify-iso", "--bundle", p, "--samples", "200"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["status"], "witnessed");

    let out = run(&["obstruct", "--bundle", p]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["matches_stored"], true);

    // A tampered certificate is recomputed and flagged.
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["bundle"]["obstruction"]["certificate"]["rows"][0]["fixed_second"] = 1.into();
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["obstruct", "--bundle", p]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["matches_stored"], false);

    // A bare bundle with a broken twist is refuted.
    let mut bundle = doc["bundle"].take();
    bundle["twist"]["weyl"]["signs"][0] = (-1).into();
    fs::write(&path, serde_json::to_string(&bundle).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify-iso", "--bundle", p, "--samples", "10"])), 1);

    assert_eq!(code(&run(&["verify-iso", "--bundle", "/nonexistent/x.json"])), 2);
}

#[test]
fn selftest_with_one_sample() {
    let out = run(&["selftest", "--samples", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema_version"], "prorigid.selftest/1");
    assert_eq!(doc["status"], "passed");
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn witness_documents_echo_config() {
    let doc = stdout_json(&run(&["witness", "s16", "--p", "11", "--samples", "5", "--seed", "9"]));
    assert_eq!(doc["schema_version"], "prorigid.witness/1");
    assert_eq!(doc["config"]["params"], serde_json::json!({"method": "s16", "p": 11}));
    assert_eq!(doc["config"]["samples"], 5);
    assert_eq!(doc["config"]["seed"], 9);
    assert_eq!(doc["iso_report"]["seed"], 9);
    assert_eq!(doc["bundle"]["obstruction"]["non_isomorphism"], prorigid::methods::NON_ISOMORPHISM_BASIS);
}

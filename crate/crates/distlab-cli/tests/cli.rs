//! End-to-end command-line tests.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn strip_timing(v: &mut serde_json::Value) {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing_ms");
    }
}

#[test]
fn single_run_even_orbit() {
    let out = run(&["--q", "3", "--delta", "2", "--f", "2", "--chi-exp", "1", "--R", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["verdict"], "not-distinguished");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"].as_bool().unwrap()));
    assert_eq!(v["solver"]["nullities"][0][1], 0);
}

#[test]
fn single_run_candidate() {
    let out = run(&["--q", "3", "--delta", "1", "--f", "1", "--chi-exp", "1", "--R", "3", "--oracle"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["verdict"], "candidate");
    assert_eq!(v["oracle"]["pass"], true);
    // propagation formula check present and passing
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["anchor"] == "FormulePropagation" && c["pass"] == true));
}

#[test]
fn steinberg_unramified() {
    let out = run(&["--steinberg", "--case", "unramified", "--tdeg", "10"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["verdict"], "not-distinguished");
}

#[test]
fn scan_rows_are_orbit_deduplicated() {
    let out = run(&["--scan", "--q", "3", "--delta", "2", "--R", "1"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let rows = v["rows"].as_array().unwrap();
    // f=1: exponents {0,1} mod 2; f=2: orbit representatives {1,2,5} mod 8
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["verdict"] == "not-distinguished"));
}

#[test]
fn empty_scan_reports_and_exits_zero() {
    let out = run(&["--scan", "--q", "3", "--delta", "2", "--f", "4"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["note"], "no admissible pairs");
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn config_errors_exit_two() {
    let out = run(&["--q", "4", "--delta", "1", "--f", "1", "--chi-exp", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--q", "3", "--delta", "1", "--f", "1", "--chi-exp", "0", "--chi-unif", "bad"]);
    assert_eq!(out.status.code(), Some(2));
    // non-regular character: orbit length mismatch
    let out = run(&["--q", "3", "--delta", "2", "--f", "2", "--chi-exp", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let args = ["--q", "3", "--delta", "2", "--f", "2", "--chi-exp", "2", "--R", "2"];
    let mut a = json_of(&run(&args));
    let mut b = json_of(&run(&args));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(a, b, "identical configs must produce identical reports");
}

#[test]
fn central_obstruction_is_reported() {
    // uniformizer value whose square is nontrivial: immediate verdict
    let out = run(&[
        "--q", "3", "--delta", "2", "--f", "2", "--chi-exp", "1", "--chi-unif", "1/3",
    ]);
    let v = json_of(&out);
    assert_eq!(v["verdict"], "not-distinguished");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["anchor"] == "CentralCharacterObstruction"));
}

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-symmetry"))
        .args(args)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

const FIELDS: [&str; 12] = [
    "matrix",
    "hnf",
    "order",
    "degree",
    "four_cycles",
    "laut_order",
    "linear_et",
    "edge_transitive",
    "nonlinear_stab",
    "family",
    "params",
    "certificates",
];

#[test]
fn analyze_reports_every_field() {
    let out = run(&["analyze", "2,-1;0,3", "--output", "json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for f in FIELDS {
        assert!(v.get(f).is_some(), "missing {f}");
    }
    assert_eq!(v["edge_transitive"], true);
    assert_eq!(v["linear_et"], false);
    assert_eq!(v["order"], 6);
    assert_eq!(v["family"], "None");
}

#[test]
fn family_and_parameters() {
    let v = json(&run(&["analyze", "[[3,1],[1,3]]", "--output", "json"], &[]));
    assert_eq!(v["family"], "Dim2-M1");
    assert_eq!(v["params"], serde_json::json!([3, 1]));
    let out = run(&["classify", "2,0,1;1,2,0;0,1,2", "--output", "json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tag"], "Dim3-M1");
    assert_eq!(v["parameters"], serde_json::json!([2, 1, 0]));
}

#[test]
fn env_cap_leaves_brute_force_fields_unknown() {
    let out = run(&["analyze", "4,0;0,4", "--output", "json"], &[("CAYLEY_CAP", "8")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["edge_transitive"], "unknown");
    assert_eq!(v["linear_et"], true);
}

#[test]
fn scan_dim3_finds_circulants() {
    let out = run(&["scan", "--dim", "3", "--det-max", "9", "--compact"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(rows.iter().any(|r| r["family"] == "Dim3-M1"));
    assert!(rows
        .iter()
        .all(|r| r["linear_et"] == (r["family"] != "None")));
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(run(&["analyze", "1,2;x,4"], &[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"], &[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], &[]).status.code(), Some(2));
}

#[test]
fn verify_adam_passes() {
    let out = run(&["verify", "adam", "--det-max", "40"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
}

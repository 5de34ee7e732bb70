use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colposet")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn chain_of_three_is_not_admissible() {
    let v = run_json(&["poset", "check-admissible", &path("chain3.json")]);
    assert_eq!(v["admissible"], false);
    let v = run_json(&["poset", "check-admissible", &path("boolean2.json")]);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["specially_admissible"], true);
}

#[test]
fn trefoil_homology() {
    let v = run_json(&["khovanov", "homology", &path("trefoil.pd")]);
    assert_eq!(v["total_rank"], 4);
    assert_eq!(v["crossings"], 3);
}

#[test]
fn trefoil_spectral_sequence_verifies() {
    let v = run_json(&["--ring", "f2", "--fixed", "1", "khovanov", "specseq", &path("trefoil.pd")]);
    assert_eq!(v["all_converge"], true);
    assert!(!v["q_degrees"].as_array().unwrap().is_empty());
}

#[test]
fn bundle_commands_verify() {
    let v = run_json(&["bundle", "specseq", &path("interval_bundle.json")]);
    assert_eq!(v["converges"], true);
    assert_eq!(v["e2_matches"], true);
    let v = run_json(&["bundle", "les-check", &path("interval_bundle.json")]);
    assert_eq!(v["exact"], true);
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(run(&["poset", "homology", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["--no-such-flag", "selftest"]).status.code(), Some(1));
    assert_eq!(run(&["khovanov", "fixed", &path("trefoil.pd")]).status.code(), Some(1));
    assert_eq!(run(&["--fixed", "9", "khovanov", "fixed", &path("trefoil.pd")]).status.code(), Some(1));
    assert_eq!(run(&["--ring", "z", "khovanov", "fixed", "--fixed", "1", &path("trefoil.pd")]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_output() {
    let out = run(&["--output", "csv", "khovanov", "homology", &path("trefoil.pd")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,i,j,rank,torsion"));
    assert!(lines.count() >= 4);
}

#[test]
fn output_is_deterministic() {
    let args = ["--fixed", "1,3", "khovanov", "specseq", &path("figure8.pd")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

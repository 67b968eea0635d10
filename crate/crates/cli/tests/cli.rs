use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotwind")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const WALKER: &str = "genus 1\ncode O1+ O2+ U1+ O3+ U2+ U3+ J+ J+\nmark 6 1 -1\n";

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = run(&["validate", s(&file(&dir, "a", "genus 0\ncode   O1+ U1+\n"))]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok), "genus 0\ncode O1+ U1+\n");

    let once = run(&["validate", s(&file(&dir, "b", "genus 0\ncode O1+ J+\n"))]);
    assert_eq!(code(&once), 1);
    assert!(String::from_utf8_lossy(&once.stderr).contains("structure"));

    let marks = run(&["validate", s(&file(&dir, "c", "genus 1\ncode O1+ U1+\nmark 0 1\n"))]);
    assert_eq!(code(&marks), 1);
    assert_eq!(code(&run(&["validate", "/nonexistent/file"])), 1);
}

#[test]
fn info_examples() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--json", "info", s(&file(&dir, "a", "genus 0\ncode O1+ J+ U1+ J+\n"))]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
    let mut labels: Vec<i64> = v["arc_labels"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    labels.sort();
    labels.dedup();
    assert_eq!(labels, [0, 1]);

    let kink = run(&["info", s(&file(&dir, "k", "genus 0\ncode O1+ U1+\n"))]);
    assert!(stdout(&kink).contains("crossing 1 sign +1 label 0 reduced 0"));
    let empty = run(&["info", s(&file(&dir, "e", "genus 0\ncode\n"))]);
    assert!(stdout(&empty).starts_with("degree 0\n"));
}

#[test]
fn parity_kinds() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "w", WALKER);
    let o = run(&["parity", s(&f), "--kind", "homological"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fixed (0, 0, -1)"));
    for kind in ["label", "label-mod:2", "gauss", "homological-s1", "homological-sg-oriented"] {
        assert_eq!(code(&run(&["parity", s(&f), "--kind", kind])), 0, "{kind}");
    }
    assert_eq!(code(&run(&["parity", s(&f), "--kind", "label-mod:3"])), 1);
    assert_ne!(code(&run(&["parity", s(&f), "--kind", "bogus"])), 0);
}

#[test]
fn apply_moves() {
    let dir = TempDir::new().unwrap();
    let kink = file(&dir, "k", "genus 0\ncode O1+ U1+\n");
    let out = dir.path().join("out");
    let o = run(&["apply", s(&kink), "--move", "M4prime", "--at", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&out).unwrap().contains("J+ U1- J- O1-"));
    assert!(stdout(&o).contains("changed 1"));

    let o = run(&["apply", s(&kink), "--move", "R1_remove", "--at", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("genus 0\ncode\n"));

    assert_eq!(code(&run(&["apply", s(&kink), "--move", "R2_remove", "--at", "0,1"])), 1);
    assert_eq!(code(&run(&["apply", s(&kink), "--move", "Nope", "--at", "0"])), 1);
    let params = r#"{"id":2,"over_first":true,"sign":-1}"#;
    let o = run(&["apply", s(&kink), "--move", "R1_add", "--at", "2", "--params", params]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("created {2}"));
}

#[test]
fn walk_checks_pass_and_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "w", WALKER);
    let args = ["walk", s(&f), "--steps", "1000", "--seed", "11", "--check", "label,homological,identities"];
    let a = run(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert!(!stdout(&a).contains("FAIL"));
    assert_eq!(a.stdout, run(&args).stdout);

    let zero = run(&["walk", s(&f), "--steps", "0"]);
    assert_eq!(code(&zero), 0);
}

#[test]
fn injected_fault_exits_two_with_counterexample() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "w", WALKER);
    let o = run(&["walk", s(&f), "--steps", "300", "--seed", "4", "--inject-fault"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("counterexample label+fault: A2 violated"));

    let o = run(&["--json", "walk", s(&f), "--steps", "300", "--seed", "4", "--inject-fault"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn universal_from_walk_trace() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "w", WALKER);
    let trace = dir.path().join("t.jsonl");
    assert_eq!(code(&run(&["walk", s(&f), "--steps", "25", "--seed", "2", "--trace-out", s(&trace)])), 0);

    let o = run(&["universal", s(&trace), "--factor", "homological"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("factor homological ok"));
    let j = run(&["--json", "universal", s(&trace), "--factor", "label"]);
    let v: Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["factor"]["ok"], true);
    assert_eq!(j.stdout, run(&["--json", "universal", s(&trace), "--factor", "label"]).stdout);

    let text = fs::read_to_string(&trace).unwrap();
    let tampered = text.replacen("\"result\":\"genus 1", "\"result\":\"genus 2", 1);
    assert_eq!(code(&run(&["universal", s(&file(&dir, "bad.jsonl", &tampered))])), 1);
}

#[test]
fn snf_matrix_file() {
    let dir = TempDir::new().unwrap();
    let o = run(&["--json", "snf", s(&file(&dir, "m", "2 2\n2 4\n6 8\n"))]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariant_factors"], serde_json::json!(["2", "4"]));
    let text = run(&["snf", s(&file(&dir, "n", "1 3\n0 0 0\n"))]);
    assert!(stdout(&text).starts_with("U\n1 1\n"));
    assert_eq!(code(&run(&["snf", s(&file(&dir, "bad", "2 2\n1 2 3\n"))])), 1);
}

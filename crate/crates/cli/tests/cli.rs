//! Black-box runs of the compiled binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubescl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn scl_pentagon_certifies_and_is_reproducible() {
    let first = run(&["scl", "--graph", "pentagon", "abcde"]);
    assert!(first.status.success());
    let text = stdout(&first);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("certificate is JSON");
    assert_eq!(doc["sclLowerBound"], "1/24");
    assert_eq!(doc["rigor"], "Certified");
    assert_eq!(doc["k"], 1);
    assert_eq!(doc["counts"].as_array().unwrap().len(), 8);

    let second = run(&["scl", "--graph", "pentagon", "abcde"]);
    assert_eq!(first.stdout, second.stdout, "same config must print the same bytes");
}

#[test]
fn analyze_reports_elliptic_without_failing() {
    let out = run(&["analyze", "--fixture", "subdivided"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["classification"], "elliptic");
    assert!(doc.get("ell").is_none());
}

#[test]
fn analyze_free_group_commutator() {
    let out = run(&["analyze", "--graph", "free2", "abAB"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["classification"], "hyperbolic");
    assert_eq!(doc["ell"], 4);
    assert_eq!(doc["d"], 1);
}

#[test]
fn embed_prints_headers_and_rows() {
    let out = run(&["embed", "--graph", "complete2", "ab"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut headers = 0;
    let mut rows = 0;
    for line in text.lines() {
        if line.starts_with('#') {
            headers += 1;
        } else if !line.is_empty() {
            assert!(
                line.split('\t').all(|f| f.parse::<i64>().is_ok()),
                "coordinate row expected, got {line:?}"
            );
            rows += 1;
        }
    }
    assert!(headers >= 2);
    assert!(rows > 0);
}

#[test]
fn verify_battery_for_a_tree_passes() {
    let out = run(&["verify", "--graph", "free2", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("6 suites: 6 passed, 0 failed (seed 7)"), "{text}");
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn target_flags_are_exclusive() {
    let out = run(&["analyze", "--graph", "free2", "--fixture", "staircase", "a"]);
    assert!(!out.status.success());
}

#[test]
fn unknown_generator_is_a_clean_error() {
    let out = run(&["scl", "--graph", "free2", "xyz"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(!err.is_empty());
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn contrast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contrast"))
        .args(args)
        .env("CS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = contrast(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn fixture(dir: &Path) -> (String, String) {
    let data = dir.join("data");
    ok(&["synth", "--fixture", "--out", data.to_str().unwrap()]);
    let m = |l: &str| data.join(format!("group_{l}.tsv")).to_str().unwrap().to_owned();
    (m("A"), m("B"))
}

#[test]
fn alpha_errors_are_reported_with_a_code() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = fixture(dir.path());
    let out_dir = dir.path().join("x");
    let out = contrast(&[
        "extract", "--group-a", &a, "--group-b", &b, "--alpha", "1.5",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error[E_ALPHA]"), "{err}");
    assert!(err.contains("every pair of vertices is detrimental"));
    assert!(!out_dir.join("run.json").exists());
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    let out = contrast(&["extract", "--alpha"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[E_ARGUMENT]"));
}

#[test]
fn summarize_writes_matrices_and_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = fixture(dir.path());
    let out = dir.path().join("sum");
    ok(&["summarize", "--group-a", &a, "--group-b", &b, "--out", out.to_str().unwrap()]);

    let diff: Vec<Vec<f64>> = fs::read_to_string(out.join("difference.csv"))
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(diff.len(), 8);
    assert_eq!(diff[3][4], 0.0);
    assert_eq!(diff[0][1], 1.0);
    assert_eq!(diff[0][2], -1.0);

    let degrees = fs::read_to_string(out.join("degrees.csv")).unwrap();
    let mut lines = degrees.lines();
    assert_eq!(lines.next(), Some("vertex,degree_A,degree_B"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    // vertex 5 (1-based) touches five class-A edges and one class-B edge
    assert_eq!(rows[4], "4,5,1");
}

#[test]
fn extract_matches_fixture_values() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = fixture(dir.path());
    let out = dir.path().join("ex");
    ok(&[
        "extract", "--group-a", &a, "--group-b", &b, "--alpha", "0.8", "--method", "local-search",
        "--out", out.to_str().unwrap(),
    ]);
    let ab = json(&out.join("result_A-minus-B.json"));
    let ba = json(&out.join("result_B-minus-A.json"));
    assert!((ab["objective"].as_f64().unwrap() - 0.6).abs() < 1e-9);
    assert!((ba["objective"].as_f64().unwrap() - 0.2).abs() < 1e-9);
    assert_eq!(ba["vertices"].as_array().unwrap().len(), 2);
    assert!(out.join("edges_A-minus-B.csv").exists());
    assert!(out.join("importance_B-minus-A.csv").exists());
}

#[test]
fn percent_alpha_is_recorded_resolved() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = fixture(dir.path());
    let out = dir.path().join("ex");
    ok(&[
        "extract", "--group-a", &a, "--group-b", &b, "--alpha", "80", "--symmetric",
        "--out", out.to_str().unwrap(),
    ]);
    let run = json(&out.join("run.json"));
    assert_eq!(run["command"], "extract");
    assert_eq!(run["alpha_resolved"]["symmetric"].as_f64(), Some(0.8));
}

#[test]
fn synth_defaults_write_a_full_cohort() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    ok(&["synth", "--out", out.to_str().unwrap()]);
    assert_eq!(fs::read_dir(out.join("graphs")).unwrap().count(), 80);
    for l in ["A", "B"] {
        let manifest = fs::read_to_string(out.join(format!("group_{l}.tsv"))).unwrap();
        assert_eq!(manifest.lines().filter(|x| x.ends_with(l)).count(), 40);
    }
    let truth = json(&out.join("ground_truth.json"));
    let planted: Vec<u64> =
        truth["planted_set"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(planted, (0..10).collect::<Vec<_>>());
}

#[test]
fn sparse_class_without_background_has_no_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    ok(&[
        "synth", "--n", "20", "--k", "5", "--group-size-a", "4", "--group-size-b", "4",
        "--p-in-b", "0", "--p-bg", "0", "--out", out.to_str().unwrap(),
    ]);
    let manifest = fs::read_to_string(out.join("group_B.tsv")).unwrap();
    let mut seen = 0;
    for line in manifest.lines().filter(|l| l.ends_with('B')) {
        let path = line.split('\t').nth(1).unwrap();
        let text = fs::read_to_string(out.join(path)).unwrap();
        assert!(text.lines().all(|l| l.trim().is_empty() || l.starts_with('#')), "{path}: {text}");
        seen += 1;
    }
    assert_eq!(seen, 4);
}

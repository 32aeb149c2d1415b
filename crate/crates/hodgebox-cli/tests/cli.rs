//! End-to-end tests of the binary: spec parsing, output formats, exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodgebox"))
}

fn polytope_path(name: &str) -> String {
    format!("{}/polytopes/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_reports_basic_data() {
    let out = run(&["validate", &polytope_path("segment")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "valid: name=segment, n=1, vertices=2, facets=2, normalized volume=2"
    );
}

#[test]
fn validate_rejects_non_simplicial_with_exit_1() {
    let out = run(&["validate", &polytope_path("cube")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not simplicial"));

    let out = run(&["validate", &polytope_path("cube"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["valid"], serde_json::json!(false));
    assert_eq!(v["kind"], serde_json::json!("not-simplicial"));
}

#[test]
fn validate_rejects_degenerate_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.json");
    std::fs::write(
        &path,
        r#"{"name":"flat","rank":2,"vertices":[[1,0],[2,0]]}"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["kind"], serde_json::json!("not-full-dimensional"));

    let path = dir.path().join("outside.json");
    std::fs::write(
        &path,
        r#"{"name":"outside","rank":2,"vertices":[[1,0],[0,1],[1,1]]}"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["kind"], serde_json::json!("origin-not-interior"));
}

#[test]
fn diamond_json_is_canonical() {
    let out = run(&[
        "diamond",
        &polytope_path("stretched-triangle"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["milnor"], serde_json::json!("5"));
    assert_eq!(v["hodge_tate"], serde_json::json!(true));
    assert_eq!(v["fractional_spectrum"], serde_json::json!(true));
    assert_eq!(
        v["hd_zero"].to_string(),
        r#"{"entries":[[0,0,1],[1,1,1],[2,2,1]],"weight":2}"#
    );
    assert_eq!(
        v["hd_nonzero"].to_string(),
        r#"{"entries":[[0,0,1],[1,1,1]],"weight":1}"#
    );
    assert_eq!(
        v["spectrum"].to_string(),
        r#"[["0",1],["1/2",1],["1",1],["3/2",1],["2",1]]"#
    );
}

#[test]
fn diamond_ascii_golden() {
    let out = run(&["diamond", &polytope_path("square")]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "HD_0 (weight 2):\n  1\n0 6 0\n  1\nHD_!=0 (weight 1):\n0\nspectrum:\n0: 1\n1: 6\n2: 1\nmilnor number: 8\nhodge-tate: true\nfractional spectrum: false\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn spectrum_json_golden() {
    let out = run(&["spectrum", &polytope_path("segment"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), r#"[["0",1],["1",1]]"#);
}

#[test]
fn verify_passes_on_bundled_specs() {
    for name in [
        "segment",
        "triangle",
        "stretched-triangle",
        "square",
        "octahedron",
    ] {
        let out = run(&["verify", &polytope_path(name), "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        assert_eq!(v["pass"], serde_json::json!(true), "{name}");
        assert_eq!(v["checks"]["spectrum_match"], serde_json::json!(true));
        assert_eq!(v["checks"]["birkhoff"], serde_json::json!(true));
        assert_eq!(v["checks"]["lefschetz"], serde_json::json!(true));
    }
}

#[test]
fn verify_with_seeded_coefficients_and_prime() {
    let out = run(&[
        "verify",
        &polytope_path("square"),
        "--coeffs",
        "random:42",
        "--prime",
        "1000003",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["seed"], serde_json::json!(42));
    assert_eq!(v["coefficients"], serde_json::json!("seeded-random(42)"));
    assert_eq!(
        v["checks"]["modular_precheck"],
        serde_json::json!({"prime": 1000003, "agrees": true})
    );
    // dimensions agree with the all-ones run
    let base = run(&["verify", &polytope_path("square"), "--format", "json"]);
    let b: serde_json::Value = serde_json::from_str(stdout(&base).trim()).unwrap();
    assert_eq!(v["per_degree"], b["per_degree"]);
}

#[test]
fn verify_reads_coefficients_from_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weighted.json");
    std::fs::write(
        &path,
        r#"{"name":"weighted","rank":1,"vertices":[[1],[-1]],"coefficients":{"0":"2/3","1":"-5"}}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!("user"));
    assert_eq!(v["milnor"], serde_json::json!("2"));

    // a zero coefficient is invalid input
    let path = dir.path().join("zero.json");
    std::fs::write(
        &path,
        r#"{"name":"zero","rank":1,"vertices":[[1],[-1]],"coefficients":{"0":"0"}}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_detects_corrupted_golden() {
    // harness self-test: corrupt an expected value and require a diff
    let out = run(&["diamond", &polytope_path("square"), "--format", "json"]);
    let good: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let corrupted = good["spectrum"].to_string().replacen("6", "7", 1);
    assert_ne!(good["spectrum"].to_string(), corrupted);
}

#[test]
fn fuzz_summarizes_runs() {
    let out = run(&[
        "fuzz", "--rank", "1", "--count", "5", "--seed", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["count"], serde_json::json!(5));
    assert_eq!(v["pass"], serde_json::json!(5));
    assert_eq!(v["failing_seeds"], serde_json::json!([]));

    // count 0: empty summary
    let out = run(&["fuzz", "--rank", "2", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0/0"));
}

#[test]
fn stdin_input_works() {
    let mut child = bin()
        .args(["spectrum", "-", "--format", "json"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(br#"{"name":"seg","rank":1,"vertices":[[1],[-1]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"[["0",1],["1",1]]"#
    );
}

#[test]
fn deterministic_output() {
    let a = run(&["verify", &polytope_path("octahedron"), "--format", "json"]);
    let b = run(&["verify", &polytope_path("octahedron"), "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
    let a = run(&["box", &polytope_path("square"), "--format", "json"]);
    let b = run(&["box", &polytope_path("square"), "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn bad_prime_is_rejected() {
    let out = run(&["verify", &polytope_path("segment"), "--prime", "1000000"]);
    assert_eq!(out.status.code(), Some(1));
}

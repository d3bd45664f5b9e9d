//! End-to-end checks of the binary: exit codes, JSON shapes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dhensel"))
}

fn testdata(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("testdata");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_dh_emits_the_exponential_certificate() {
    let out = run(&[
        "solve-dh",
        "--poly",
        "x1' - x1",
        "--jet",
        "1,1",
        "--gamma",
        "5",
        "--terms",
        "8",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["ballCheck"], true);
    assert_eq!(doc["valuedTaylor"], true);
    assert_eq!(doc["constantTermIdentity"], true);
    assert_eq!(doc["replay"], true);
    let text = doc["solutionText"].as_str().unwrap();
    assert!(text.starts_with("1 + t1 + 1/2*t1^2"));
}

#[test]
fn parse_echoes_derivative_aliases_to_one_normal_form() {
    let a = run(&["--format", "pretty", "parse", "x1^(2) + x1''"]);
    assert!(a.status.success());
    assert_eq!(String::from_utf8_lossy(&a.stdout).trim(), "2*x1''");
}

#[test]
fn byte_identical_output_for_identical_invocations() {
    let args = [
        "check",
        "solver-certificates",
        "--seed",
        "7",
        "--trials",
        "5",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);
}

#[test]
fn usage_errors_exit_2_and_computation_errors_exit_1() {
    let usage = run(&["parse", "x1 +"]);
    assert_eq!(usage.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&usage.stderr).unwrap();
    assert_eq!(err["error"], "SyntaxError");

    let unknown_var = run(&["parse", "--stage", "1", "t5"]);
    assert_eq!(unknown_var.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&unknown_var.stderr).unwrap();
    assert_eq!(err["error"], "UnknownVariable");

    let degenerate = run(&[
        "solve-dh",
        "--poly",
        "x1'^2 - x1",
        "--jet",
        "0,0",
        "--terms",
        "4",
    ]);
    assert_eq!(degenerate.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&degenerate.stderr).unwrap();
    assert_eq!(err["error"], "DegeneratePoint");
}

#[test]
fn weil_descend_prints_the_hand_case() {
    let out = run(&[
        "--format",
        "pretty",
        "weil-descend",
        "--algebra",
        &testdata("x2plus1.json"),
        "--extension",
        &testdata("gaussian.json"),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines, vec!["1 + x1^2 - x2^2", "2*x1*x2"]);
}

#[test]
fn weil_tau_maps_the_coordinate_point_to_i() {
    let out = run(&[
        "weil-tau",
        "--algebra",
        &testdata("x2plus1.json"),
        "--extension",
        &testdata("gaussian.json"),
        "--point",
        "0,1",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["lpoint"][0][0], "0");
    assert_eq!(doc["lpoint"][0][1], "1");
    // a non-point is a computation error
    let bad = run(&[
        "weil-tau",
        "--algebra",
        &testdata("x2plus1.json"),
        "--extension",
        &testdata("gaussian.json"),
        "--point",
        "1,1",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(err["error"], "RelationViolated");
}

#[test]
fn weil_check_bounds_reports_the_witness() {
    let out = run(&[
        "weil-check-bounds",
        "--extension",
        &testdata("ramified.json"),
        "--phi",
        "1,1",
        "--psi",
        "1 + t0^4, 1 + t0^4",
        "--gamma",
        "3",
        "--separated",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["hypothesis"], true);
    assert_eq!(doc["conclusion"], true);
    assert!(doc["separatedBounds"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b["holds"] == true));
}

#[test]
fn solve_algebra_runs_from_a_spec_file() {
    let out = run(&[
        "solve-algebra",
        "--spec",
        &testdata("exp-algebra.json"),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["ballCheck"], true);
    assert_eq!(doc["relationsCheck"], true);
    let text = doc["imagesText"]["x"].as_str().unwrap();
    assert!(text.starts_with("1 + t0 + 1/2*t0^2 + 1/6*t0^3"));
}

#[test]
fn solve_algebra_handles_triangular_chains() {
    let out = run(&[
        "solve-algebra",
        "--spec",
        &testdata("pair-algebra.json"),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["ballCheck"], true);
    assert_eq!(doc["relationsCheck"], true);
    // y' = x forces y = exp(t0) - 1
    let y = doc["imagesText"]["y"].as_str().unwrap();
    assert!(y.starts_with("t0 + 1/2*t0^2 + 1/6*t0^3"));
}

#[test]
fn hensel_subcommand_reports_iterations() {
    let out = run(&[
        "hensel",
        "--system",
        "x1^2 - 1 - t0",
        "--approx",
        "1",
        "--target",
        "8",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert!(doc["iterations"].as_u64().unwrap() <= 5);
    let text = doc["solutionText"][0].as_str().unwrap();
    assert!(text.starts_with("1 + 1/2*t0 - 1/8*t0^2 + 1/16*t0^3"));
    assert!(text.ends_with("O(t0^8)"));
}

#[test]
fn check_subcommand_self_test_contract() {
    // one fast suite through the real binary; `check all` is exercised by
    // the library-level smoke test and the acceptance criteria
    let out = run(&["check", "value-order", "--seed", "42", "--trials", "40"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], true);

    let unknown = run(&["check", "definitely-not-a-suite"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn retry_precision_resolves_window_limited_separants() {
    // the leading coefficient's first nonzero term sits just beyond the
    // default 16-term window, so the separant is indistinguishable from
    // zero until the precision doubles
    let tail: String = (0..=16)
        .map(|i| match i {
            0 => " - 1".to_string(),
            1 => " - t0".to_string(),
            i => format!(" - t0^{i}"),
        })
        .collect();
    let poly = format!("((1 - t0)^(-1){tail})*x1' - x1");
    let args = |retry: bool| {
        let mut v = vec![
            "solve-dh".to_string(),
            "--poly".to_string(),
            poly.clone(),
            "--jet".to_string(),
            "0,0".to_string(),
            "--gamma".to_string(),
            "1".to_string(),
            "--terms".to_string(),
            "3".to_string(),
        ];
        if retry {
            v.push("--retry-precision".to_string());
        }
        v
    };
    let plain = bin().args(args(false)).output().unwrap();
    assert_eq!(plain.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&plain.stderr).unwrap();
    assert_eq!(err["error"], "DegeneratePoint");

    let retried = bin().args(args(true)).output().unwrap();
    assert!(retried.status.success());
    let doc = stdout_json(&retried);
    assert_eq!(doc["ballCheck"], true);
}

#[test]
fn ramification_flag_admits_fractional_exponents() {
    let out = run(&[
        "--ramification",
        "2",
        "--format",
        "pretty",
        "parse",
        "t0^(1/2) * t0^(1/2)",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "t0");

    let coarse = run(&["parse", "t0^(1/2)"]);
    assert_eq!(coarse.status.code(), Some(2));
}

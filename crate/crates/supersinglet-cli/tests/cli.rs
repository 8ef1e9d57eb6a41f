//! End-to-end tests of the `supersinglet` binary: exit codes, report
//! documents, and byte-level determinism of repeated runs.

use std::path::Path;
use std::process::{Command, Output};

use supersinglet::families::{FamilyKind, ProjectorFamily};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supersinglet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn parse_stdout(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

fn parse_file(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("report file exists");
    serde_json::from_str(&text).expect("report file is a JSON document")
}

#[test]
fn family_four_k1_writes_schema_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let out = run(&["family", "--kind", "four", "--k", "1", "--out"])
        .status
        .code();
    assert_eq!(out, Some(2), "missing value for --out is a usage error");

    let out = run(&[
        "family",
        "--kind",
        "four",
        "--k",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");

    // The written document must round-trip through the family parser
    // even though it carries the extra config/version/validation keys.
    let doc = parse_file(&path);
    let f: ProjectorFamily = ProjectorFamily::from_json(&doc).expect("document matches schema");
    assert_eq!(f.kind, FamilyKind::FourProjector);
    assert_eq!(f.dim, 3);
    assert_eq!(f.n_inputs, 4);
    assert_eq!(f.rank, 1);
    assert_eq!(doc["version"], serde_json::json!(supersinglet::VERSION));
    assert_eq!(doc["config"]["command"], serde_json::json!("family"));
    assert_eq!(doc["validation"]["pass"], serde_json::json!(true));
}

#[test]
fn verify_sync_d3_n4_passes() {
    let out = run(&["verify-sync", "--d", "3", "--N", "4"]);
    assert_eq!(exit_code(&out), 0);
    let doc = parse_stdout(&out);
    assert_eq!(doc["synchronous"]["pass"], serde_json::json!(true));
    assert_eq!(doc["synchronous"]["forbidden_entries"], serde_json::json!(0));
    assert_eq!(doc["config"]["family"]["kind"], serde_json::json!("rank_one"));
}

#[test]
fn correlate_d9_full_exceeds_size_cap() {
    let out = run(&["correlate", "--d", "9", "--N", "4", "--mode", "full"]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("size cap") && stderr.contains("1000000"),
        "stderr names the violated cap and the measured size: {stderr}"
    );
}

#[test]
fn usage_errors_exit_2_with_usage_on_stderr() {
    let out = run(&["family", "--kind", "four", "--k", "1", "--bogus"]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "stderr shows usage: {stderr}");

    let out = run(&["no-such-command"]);
    assert_eq!(exit_code(&out), 2);

    // Config errors detected after parsing also exit 2.
    let out = run(&["family", "--kind", "rank-one", "--k", "2"]);
    assert_eq!(exit_code(&out), 2);
    let out = run(&["spectrum", "--d", "4", "--N", "4"]);
    assert_eq!(exit_code(&out), 2, "no four-projector family at even d");
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(&["--help"]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify-sync"));
    let out = run(&["--version"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn failed_expectation_exits_1_but_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lhv.json");
    // The canonical table is nonlocal, so expecting local must fail.
    let out = run(&[
        "lhv",
        "--d",
        "3",
        "--N",
        "4",
        "--expect",
        "local",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let doc = parse_file(&path);
    assert_eq!(doc["lhv"]["is_local"], serde_json::json!(false));
    assert_eq!(doc["pass"], serde_json::json!(false));
}

#[test]
fn infeasible_budget_exits_1_but_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("budget.json");
    let out = run(&[
        "budget",
        "--N",
        "4",
        "--d",
        "3",
        "--r",
        "1",
        "--lambda2",
        "4.0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let doc = parse_file(&path);
    assert_eq!(doc["feasible"], serde_json::json!(false));
    let binding = doc["binding_constraint"].as_str().unwrap();
    assert!(binding.contains("lambda_2"), "names the constraint: {binding}");
}

#[test]
fn feasible_budget_reports_constants() {
    let out = run(&["budget", "--N", "4", "--d", "3", "--r", "1", "--lambda2", "3.1111111111111112"]);
    assert_eq!(exit_code(&out), 0);
    let doc = parse_stdout(&out);
    assert_eq!(doc["feasible"], serde_json::json!(true));
    let eps_prime = doc["budget"]["epsilon_prime"].as_f64().unwrap();
    assert!(eps_prime > 1e-4 && eps_prime < 1e-3);
    assert_eq!(doc["budget"]["x"], serde_json::json!("4/3"));
}

#[test]
fn repeat_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&["spectrum", "--d", "3", "--N", "4", "--out", path.to_str().unwrap()]);
        assert_eq!(exit_code(&out), 0);
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "identical config produces byte-identical reports"
    );

    // A seeded stochastic command is just as reproducible.
    let c = dir.path().join("c.json");
    let d = dir.path().join("d.json");
    for path in [&c, &d] {
        let out = run(&[
            "noise-sweep",
            "--d",
            "3",
            "--N",
            "4",
            "--visibilities",
            "0.99",
            "--jitters",
            "0.01",
            "--word-length",
            "2",
            "--trials",
            "5",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    assert_eq!(std::fs::read(&c).unwrap(), std::fs::read(&d).unwrap());
}

#[test]
fn correlate_csv_writes_plain_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&[
        "correlate",
        "--d",
        "3",
        "--N",
        "4",
        "--mode",
        "diagonal",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mu_0,mu_1,mu_2,a_0,a_1,a_2,p",
        "header names party-ordered inputs and outcomes"
    );
    // 4 diagonal rows times 2^3 outcome tuples.
    assert_eq!(lines.count(), 32);
}

#[test]
fn slater_and_algebra_commands_pass() {
    let out = run(&["slater", "--d", "3", "--trials", "10", "--seed", "1"]);
    assert_eq!(exit_code(&out), 0);
    let doc = parse_stdout(&out);
    assert_eq!(doc["state"]["nonzero_amplitudes"], serde_json::json!(6));
    assert!(doc["singlet"]["max_deviation"].as_f64().unwrap() <= 1e-10);

    let out = run(&["lie-closure", "--d", "3", "--N", "4"]);
    assert_eq!(exit_code(&out), 0);
    let doc = parse_stdout(&out);
    assert_eq!(doc["closure"]["closure_dim"], serde_json::json!(9));

    let out = run(&["commutant", "--d", "3", "--N", "4"]);
    assert_eq!(exit_code(&out), 0);
    let doc = parse_stdout(&out);
    assert_eq!(doc["commutant"]["dim"], serde_json::json!(6));
    assert!(doc["commutant"]["subspace_distance"].as_f64().unwrap() <= 1e-8);

    let out = run(&["schur-weyl", "--d", "3", "--n", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc = parse_stdout(&out);
    assert_eq!(doc["schur_weyl"]["total"], serde_json::json!(27));
    assert_eq!(doc["schur_weyl"]["antisymmetric_dim_sym"], serde_json::json!(1));
}

//! End-to-end checks of the experiment drivers: CSV schema and
//! idempotence, sweep handling, spot values, and the installed binary's
//! exit behavior.

use std::process::Command;

use utpm_cli::andrew::{andrew_csv, run_andrew, ANDREW_HEADER};
use utpm_cli::config::{default_delta_grid, fmt_full, parse_t_grid, DEFAULT_T_GRID};
use utpm_cli::covariance::{covariance_csv, run_covariance, COV_HEADER};
use utpm_cli::householder::run_householder_demo;

#[test]
fn covariance_csv_schema_and_content() {
    let ts = parse_t_grid(DEFAULT_T_GRID).unwrap();
    let rows = run_covariance(2, &ts).unwrap();
    let csv = covariance_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], COV_HEADER);
    assert_eq!(lines.len(), 1 + 2 * 19, "two comparisons per sweep point");

    // Endpoints present, fields full-precision, kinds alternating.
    assert!(lines[1].starts_with(&fmt_full(0.1)));
    assert!(lines[38].starts_with(&fmt_full(1.0)));
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        assert!(fields[0].parse::<f64>().is_ok());
        assert_eq!(fields[1], if i % 2 == 0 { "csda-vs-utp" } else { "direct-vs-nullspace" });
        let diff: f64 = fields[2].parse().unwrap();
        assert!((0.0..=1e-10).contains(&diff), "difference out of range: {line}");
    }
}

#[test]
fn covariance_csv_is_idempotent() {
    let ts = parse_t_grid("0.1:1.0:5").unwrap();
    let a = covariance_csv(&run_covariance(2, &ts).unwrap());
    let b = covariance_csv(&run_covariance(2, &ts).unwrap());
    assert_eq!(a, b, "rerun must be bit-identical");
}

#[test]
fn andrew_csv_schema_and_content() {
    let deltas = default_delta_grid();
    let rows = run_andrew(5, &deltas, utpm::eigh::DEFAULT_BLOCK_TOL).unwrap();
    let csv = andrew_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], ANDREW_HEADER);
    // 4 curves x 5 coefficients per delta.
    assert_eq!(lines.len(), 1 + deltas.len() * 4 * 5);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert!(fields[0].parse::<f64>().is_ok());
        let idx: usize = fields[1].parse().unwrap();
        assert!((1..=4).contains(&idx));
        let deg: usize = fields[2].parse().unwrap();
        assert!(deg < 5);
        assert!(fields[3].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn andrew_csv_is_idempotent() {
    let deltas = [0.0, 1e-8, 1e-2];
    let a = andrew_csv(&run_andrew(5, &deltas, 1e-7).unwrap());
    let b = andrew_csv(&run_andrew(5, &deltas, 1e-7).unwrap());
    assert_eq!(a, b, "rerun must be bit-identical");
}

#[test]
fn andrew_extreme_delta_rows_meet_documented_bounds() {
    // The gap-1 case reconstructs the first curve to machine precision,
    // and the exactly degenerate case stays below 1e-10 everywhere.
    let rows = run_andrew(5, &[0.0, 1.0], utpm::eigh::DEFAULT_BLOCK_TOL).unwrap();
    for r in &rows {
        if r.delta == 1.0 && r.eigenvalue_index == 1 {
            assert!(r.abs_error <= 1e-10, "delta=1 curve 1 coefficient {}: {}", r.coefficient_degree, r.abs_error);
        }
        if r.delta == 0.0 {
            assert!(r.abs_error <= 1e-10, "delta=0 curve {} coefficient {}: {}", r.eigenvalue_index, r.coefficient_degree, r.abs_error);
        }
    }
}

#[test]
fn householder_report_is_idempotent_and_complete() {
    let a = run_householder_demo();
    let b = run_householder_demo();
    assert_eq!(a.report, b.report);
    assert!(a.pass);
}

// --- binary end-to-end ----------------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_utpm-cli"))
}

#[test]
fn binary_covariance_writes_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cov.csv");
    let output = bin()
        .args(["covariance", "--t-grid", "0.1:1.0:3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    assert!(csv.starts_with(COV_HEADER));
    let summary = String::from_utf8(output.stdout).unwrap();
    assert!(summary.contains("PASS"), "{summary}");
}

#[test]
fn binary_without_out_flag_keeps_csv_on_stdout() {
    let output = bin().args(["andrew", "--delta", "0.01", "--degree", "3"]).output().unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.starts_with(ANDREW_HEADER), "CSV must open stdout, got: {stdout}");
    assert_eq!(stdout.lines().count(), 1 + 4 * 3);
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("PASS"), "summary should move to stderr: {stderr}");
}

#[test]
fn binary_rejects_invalid_configuration() {
    let output = bin().args(["covariance", "--t-grid", "nonsense"]).output().unwrap();
    assert!(!output.status.success());
    let output = bin().args(["covariance", "--degree", "1"]).output().unwrap();
    assert!(!output.status.success());
    let output = bin().args(["andrew", "--degree", "0"]).output().unwrap();
    assert!(!output.status.success());
}

#[test]
fn binary_householder_demo_reports_the_contrast() {
    let output = bin().args(["householder-demo"]).output().unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("beta = 0 shortcut"));
    assert!(stdout.contains("not upper triangular"));
}

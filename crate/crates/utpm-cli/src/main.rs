//! Command-line driver: see the library docs for what each study does.
//!
//! CSV goes to `--out` when given (summary on stdout) or to stdout
//! (summary on stderr).  The exit code is 0 exactly when every checked
//! threshold passed.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use utpm_cli::andrew::{andrew_csv, andrew_verdict, run_andrew};
use utpm_cli::config::{default_delta_grid, parse_t_grid, ExperimentConfig, DEFAULT_T_GRID};
use utpm_cli::covariance::{covariance_csv, covariance_verdict, run_covariance, COV_PASS_TOL};
use utpm_cli::householder::run_householder_demo;
use utpm_cli::selftest::run_all;

#[derive(Parser)]
#[command(name = "utpm-cli", about = "Experiment driver for the utpm library", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue-splitting study on the closed-form 4x4 system.
    Andrew {
        /// Number of Taylor coefficients to carry.
        #[arg(long, default_value_t = 5)]
        degree: usize,
        /// Gap parameter; repeat for a sweep (default: 0 plus decades 1e-16..1).
        #[arg(long)]
        delta: Vec<f64>,
        /// Spectral gap below which eigenvalues are treated as fused.
        #[arg(long, default_value_t = utpm::eigh::DEFAULT_BLOCK_TOL)]
        block_tol: f64,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covariance-matrix consistency study along x = t(3,1).
    Covariance {
        /// Number of Taylor coefficients to carry (at least 2).
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Sweep description lo:hi:n.
        #[arg(long, default_value = DEFAULT_T_GRID)]
        t_grid: String,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contrast the transcribed Householder algorithm with the lifted factorization.
    HouseholderDemo {
        /// Report destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full acceptance battery.
    Selftest {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Writes `content` to `out` or stdout; returns whether stdout was used
/// (which moves the summary to stderr to keep the CSV clean).
fn emit(out: &Option<PathBuf>, content: &str) -> std::io::Result<bool> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            Ok(false)
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(true)
        }
    }
}

fn summarize(to_stderr: bool, lines: &[String]) {
    for line in lines {
        if to_stderr {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

fn run() -> Result<bool, String> {
    match Cli::parse().command {
        Command::Andrew { degree, delta, block_tol, out } => {
            let deltas = if delta.is_empty() { default_delta_grid() } else { delta };
            let config = ExperimentConfig {
                degree,
                deltas: deltas.clone(),
                block_tol,
                out: out.clone(),
                ..ExperimentConfig::default()
            };
            config.validate()?;
            let rows = run_andrew(degree, &deltas, block_tol).map_err(|e| e.to_string())?;
            let (pass, failures) = andrew_verdict(&rows, block_tol);
            let csv_to_stdout = emit(&out, &andrew_csv(&rows)).map_err(|e| e.to_string())?;
            let mut lines = vec![format!(
                "andrew: {} rows over {} deltas, degree {degree}: {}",
                rows.len(),
                deltas.len(),
                if pass { "PASS" } else { "FAIL" }
            )];
            lines.extend(failures);
            summarize(csv_to_stdout, &lines);
            Ok(pass)
        }
        Command::Covariance { degree, t_grid, out } => {
            if degree < 2 {
                return Err("covariance study needs --degree >= 2 (first-order coefficient)".into());
            }
            let ts = parse_t_grid(&t_grid)?;
            let config = ExperimentConfig {
                degree,
                ts: ts.clone(),
                out: out.clone(),
                ..ExperimentConfig::default()
            };
            config.validate()?;
            let rows = run_covariance(degree, &ts).map_err(|e| e.to_string())?;
            let (pass, worst) = covariance_verdict(&rows);
            let csv_to_stdout = emit(&out, &covariance_csv(&rows)).map_err(|e| e.to_string())?;
            summarize(
                csv_to_stdout,
                &[format!(
                    "covariance: {} points, worst difference {worst:.3e} (tolerance {COV_PASS_TOL:.0e}): {}",
                    ts.len(),
                    if pass { "PASS" } else { "FAIL" }
                )],
            );
            Ok(pass)
        }
        Command::HouseholderDemo { out } => {
            let demo = run_householder_demo();
            let csv_to_stdout = emit(&out, &demo.report).map_err(|e| e.to_string())?;
            summarize(
                csv_to_stdout,
                &[format!("householder-demo: {}", if demo.pass { "PASS" } else { "FAIL" })],
            );
            Ok(demo.pass)
        }
        Command::Selftest { seed } => {
            let outcomes = run_all(seed);
            let mut pass = true;
            for o in &outcomes {
                println!("{}", o.line());
                pass &= o.passed;
            }
            println!("selftest: {}", if pass { "PASS" } else { "FAIL" });
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

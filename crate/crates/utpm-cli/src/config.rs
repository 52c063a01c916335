//! Experiment configuration: sweep grids, tolerances, output target.

use std::path::PathBuf;

/// Validated settings shared by the experiment subcommands.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Number of Taylor coefficients carried by every polynomial.
    pub degree: usize,
    /// Gap parameters for the eigenvalue-splitting study.
    pub deltas: Vec<f64>,
    /// Evaluation points for the covariance study.
    pub ts: Vec<f64>,
    /// Spectral gap below which eigenvalue curves are treated as fused.
    pub block_tol: f64,
    /// CSV destination; `None` writes to standard output.
    pub out: Option<PathBuf>,
    /// Seed for the randomized self-test suites.
    pub seed: u64,
}

impl ExperimentConfig {
    /// Checks the invariants every experiment relies on: nonempty sweeps,
    /// at least one coefficient, a positive block tolerance.
    pub fn validate(&self) -> Result<(), String> {
        if self.degree < 1 {
            return Err("degree must be at least 1".into());
        }
        if self.deltas.is_empty() {
            return Err("delta sweep must be nonempty".into());
        }
        if self.ts.is_empty() {
            return Err("t sweep must be nonempty".into());
        }
        if self.block_tol.is_nan() || self.block_tol <= 0.0 {
            return Err("block tolerance must be positive".into());
        }
        Ok(())
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            degree: 5,
            deltas: default_delta_grid(),
            ts: parse_t_grid(DEFAULT_T_GRID).expect("default grid parses"),
            block_tol: utpm::eigh::DEFAULT_BLOCK_TOL,
            out: None,
            seed: 0,
        }
    }
}

/// Default covariance sweep: 19 evenly spaced points in [0.1, 1].
pub const DEFAULT_T_GRID: &str = "0.1:1.0:19";

/// Default gap sweep: zero plus the decades 1e-16 … 1.
pub fn default_delta_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend((-16..=0).map(|e| 10f64.powi(e)));
    grid
}

/// Parses a `lo:hi:n` sweep description into `n` evenly spaced points
/// with both endpoints included.
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:n, got {s:?}"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("bad lower bound {:?}: {e}", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("bad upper bound {:?}: {e}", parts[1]))?;
    let n: usize = parts[2].parse().map_err(|e| format!("bad point count {:?}: {e}", parts[2]))?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(format!("need finite lo <= hi, got {lo}:{hi}"));
    }
    if n == 0 {
        return Err("point count must be at least 1".into());
    }
    if n == 1 {
        if lo != hi {
            return Err("a single-point grid needs lo == hi".into());
        }
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect())
}

/// Full-precision decimal rendering (17 significant digits), enough for
/// every binary64 value to round-trip exactly; the studies produce
/// log-scale error data where truncated output would be useless.
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

//! Experiment driver for the `utpm` library.
//!
//! Two numerical studies exercise the lifted factorizations end to end:
//!
//! * **andrew** — a 4×4 symmetric matrix polynomial with closed-form
//!   eigenvalue curves, two of which collide at `t = 0` with a gap
//!   controlled by a parameter δ.  The study sweeps δ, reconstructs the
//!   curves with [`utpm::eigh::eigh_pushforward`], and reports the
//!   absolute coefficient errors against the analytic curves.
//! * **covariance** — the covariance matrix of a small constrained
//!   least-squares problem computed two ways (a saddle-point solve and a
//!   nullspace/QR route), differentiated in Taylor arithmetic and checked
//!   against a complex-step oracle along a sweep of evaluation points.
//!
//! A third subcommand demonstrates why the factorizations are lifted
//! through their defining equations rather than by transcribing the
//! classical Householder algorithm, and `selftest` runs the full
//! acceptance battery.  Every table is emitted as CSV with full-precision
//! (`{:.16e}`) fields so the values round-trip exactly.

pub mod andrew;
pub mod config;
pub mod covariance;
pub mod householder;
pub mod selftest;

pub use config::{default_delta_grid, parse_t_grid, ExperimentConfig};

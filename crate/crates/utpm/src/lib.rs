//! Truncated univariate Taylor polynomial (UTP) arithmetic with lifted
//! QR and real symmetric eigenvalue decompositions.
//!
//! A UTP of degree `D` stores the coefficients `y_0, …, y_{D-1}` of a
//! curve `y(t) = Σ y_d t^d + O(t^D)`, i.e. `y_d = y^{(d)}(0)/d!`.
//! Propagating UTPs through a program (the *pushforward*) computes
//! higher-order directional derivatives of everything the program does;
//! the matching *pullback* rules propagate adjoints for reverse-mode
//! differentiation.
//!
//! The interesting part is the two matrix factorizations.  Running a
//! textbook QR or eigenvalue routine coefficient-wise is wrong in
//! general — branch conditions only see the degree-0 coefficient, so a
//! decision that is correct for the base point can be wrong for the
//! curve (see [`qr::householder_qr_taylor`] for a demonstration).
//! Instead, [`qr::qr_pushforward`] and [`eigh::eigh_pushforward`] solve
//! the factorizations' defining equations order by order, which keeps
//! orthogonality, triangularity and (block-)diagonality exact by
//! construction.  For the eigendecomposition this handles repeated
//! eigenvalues whose curves separate at higher coefficients.
//!
//! [`qr::qr_pullback`] and [`eigh::eigh_pullback`] implement the
//! reverse-mode rules on top of the factor polynomials.  The
//! [`oracles`] module provides independent verification: residuals of
//! the defining equations, complex-step and finite-difference
//! derivative references, and a closed-form 4×4 eigenvalue test system.
//!
//! Conventions used throughout: a "degree `D`" polynomial stores `D`
//! coefficients (so plain matrices are the `D = 1` case); shape and
//! degree mismatches are programming errors and panic, while numerical
//! failures (rank deficiency, repeated eigenvalues, inconsistent
//! factors, domain violations) are reported through [`Error`].

// Coefficient recurrences read clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod eigh;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod oracles;
pub mod qr;
pub mod scalar;

pub use error::{Error, Result};
pub use matrix::{BlockVector, SkeletalProjector, UtpMatrix};
pub use scalar::UtpScalar;

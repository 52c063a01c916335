//! Error type shared by all fallible operations in this crate.
//!
//! Dimension and degree mismatches are programming errors and panic (the
//! same convention `ndarray` uses for shape mismatches).  Everything that
//! can fail for *numerical* reasons — domain violations, singular leading
//! coefficients, rank deficiency, violated preconditions — returns
//! `Result<_, Error>` so callers can handle it.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An elementary function was evaluated outside its domain, e.g.
    /// `ln` or `sqrt` of a polynomial with non-positive leading coefficient.
    #[error("{func} is undefined for leading coefficient {value}")]
    DomainViolation { func: &'static str, value: f64 },

    /// Division by a polynomial whose leading coefficient is zero.
    #[error("division by a Taylor polynomial with zero leading coefficient")]
    ZeroLeadingCoefficient,

    /// A coefficient that must be inverted is singular (triangular or
    /// general dense leading coefficient).
    #[error("singular leading coefficient: |pivot| = {pivot:.3e} below threshold {threshold:.3e}")]
    SingularLeadingCoefficient { pivot: f64, threshold: f64 },

    /// `pinv_tall` requires the rows below the top square block to vanish.
    #[error("pseudo-inverse input has non-zero bottom rows (norm {norm:.3e})")]
    NonzeroBottomRows { norm: f64 },

    /// The leading coefficient of a QR input does not have full column rank.
    #[error("rank-deficient leading coefficient: smallest |diag(R)| = {smallest:.3e} below {threshold:.3e}")]
    RankDeficient { smallest: f64, threshold: f64 },

    /// A symmetric-only operation received an asymmetric matrix.
    #[error("matrix coefficient is not symmetric: asymmetry norm {norm:.3e} exceeds {tol:.3e}")]
    NotSymmetric { norm: f64, tol: f64 },

    /// Block detection requires a non-decreasing eigenvalue sequence.
    #[error("eigenvalue sequence is not sorted in non-decreasing order")]
    Unsorted,

    /// An orthogonality precondition was violated (e.g. `qlift` input).
    #[error("input violates orthogonality: residual {residual:.3e} exceeds {tol:.3e}")]
    NotOrthogonal { residual: f64, tol: f64 },

    /// Pullback input validation: the supplied factors do not satisfy the
    /// defining equations of the factorization they claim to come from.
    #[error("factors do not satisfy defining equations: residual {residual:.3e} exceeds {tol:.3e}")]
    InconsistentFactors { residual: f64, tol: f64 },

    /// The reverse-mode eigendecomposition rule requires distinct eigenvalues.
    #[error("repeated eigenvalues: smallest gap {gap:.3e} below {tol:.3e}")]
    RepeatedEigenvalues { gap: f64, tol: f64 },

    /// A constructor received NaN or infinite entries.
    #[error("non-finite value in input")]
    NonFinite,

    /// LU factorization failed (matrix numerically singular).
    #[error("matrix is singular to working precision")]
    Singular,

    /// Iterative eigenvalue solver failed to converge (should not happen
    /// for finite symmetric input at the sizes this crate targets).
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;

//! Forward and reverse derivatives of the full QR decomposition in
//! truncated Taylor arithmetic.
//!
//! The factorization is characterized by its defining equations rather
//! than by any particular elimination algorithm: for `A` of shape `M×N`
//! (`M >= N`, full column rank) we seek square orthogonal `Q` (`M×M`) and
//! upper-triangular `R` (`M×N`) with
//!
//! ```text
//! 0 = Q·R - A,    0 = QᵀQ - I,    0 = P_L ∘ R,
//! ```
//!
//! where `P_L` masks the strictly lower part.  [`qr_pushforward`] solves
//! these equations degree by degree (sequential lifting: the degree-0
//! part is a classical Householder QR, each higher coefficient is
//! obtained in closed form from the previous ones).  [`qr_pullback`]
//! accumulates the reverse-mode adjoint of the same map.
//!
//! [`householder_vector`] and [`householder_qr_taylor`], by contrast, are
//! deliberately *naive* transcriptions of the classical reflector-based
//! algorithm into Taylor arithmetic.  They follow the control flow of the
//! underlying real-arithmetic code, deciding branches on zeroth Taylor
//! coefficients.  On inputs whose leading coefficient is rank deficient
//! in the branch-relevant sense this produces results that are *wrong
//! beyond degree 0* (a non-triangular `R`) without raising any error —
//! they exist to demonstrate why the defining-equation approach is used
//! for derivatives.

use crate::error::{Error, Result};
use crate::linalg::{householder_qr, inf_norm, upper_tri_inverse};
use crate::matrix::{SkeletalProjector, UtpMatrix};
use crate::oracles::residual_qr;
use crate::scalar::UtpScalar;
use ndarray::{Array2, s};

/// Relative rank tolerance: the smallest diagonal entry of the degree-0
/// `R` must be at least this multiple of `‖A_0‖∞`.
pub const RANK_TOL: f64 = 1e-10;

/// Default relative tolerance for pullback input validation.
pub const VALIDATION_TOL: f64 = 1e-8;

/// Result of [`qr_pushforward`]: `q` is `M×M`, `r` is `M×N` with zero
/// rows below the top square block.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: UtpMatrix,
    pub r: UtpMatrix,
}

impl QrFactors {
    /// Economy-size view: the first `N` columns of `Q` and the top `N×N`
    /// block of `R`, so that `A = Q_thin · R_thin` still holds.
    pub fn thin(&self) -> (UtpMatrix, UtpMatrix) {
        let n = self.r.ncols();
        let m = self.q.nrows();
        (self.q.submatrix(0..m, 0..n), self.r.submatrix(0..n, 0..n))
    }
}

/// One step of the coefficient recurrence: given the already-computed
/// coefficients `q[0..d]`, `r[0..d]` and the input coefficient `a_d`,
/// returns `(ΔF, S, X)` with
///
/// ```text
/// ΔF = A_d - Σ_{k=1}^{d-1} Q_{d-k} R_k
/// S  = -½ Σ_{k=1}^{d-1} Q_{d-k}ᵀ Q_k             (exactly symmetric)
/// X  = Y - Yᵀ,  Y = P_L ∘ (Q_0ᵀ ΔF R_top⁻¹ - S)  on the first N columns
/// ```
///
/// `X` is exactly antisymmetric by construction.
pub(crate) fn lift_step(
    q: &[Array2<f64>],
    r: &[Array2<f64>],
    a_d: &Array2<f64>,
    r0_top_inv: &Array2<f64>,
) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
    let d = q.len();
    let m = q[0].nrows();
    let n = r[0].ncols();

    let mut df = a_d.clone();
    for k in 1..d {
        df = &df - &q[d - k].dot(&r[k]);
    }

    let mut s_raw = Array2::<f64>::zeros((m, m));
    for k in 1..d {
        s_raw = &s_raw + &q[d - k].t().dot(&q[k]);
    }
    s_raw *= -0.5;
    // Symmetrize: IEEE addition commutes, so (s + sᵀ)/2 is exactly symmetric.
    let s_mat = (&s_raw + &s_raw.t()) * 0.5;

    let w = q[0].t().dot(&df); // Q_0ᵀ ΔF, the shared M×N workpiece
    let mut y = Array2::<f64>::zeros((m, m));
    let first_cols = &w.dot(r0_top_inv) - &s_mat.slice(s![.., ..n]);
    for i in 0..m {
        for j in 0..n.min(i) {
            y[[i, j]] = first_cols[[i, j]]; // strictly lower, first N columns
        }
    }
    // a - b = -(b - a) exactly, so x is exactly antisymmetric.
    let x = &y - &y.t();
    (df, s_mat, x)
}

/// Lifts the QR decomposition through a matrix Taylor polynomial.
///
/// Requires `M >= N` and a full-column-rank leading coefficient
/// (smallest `|diag(R_0)|` at least [`RANK_TOL`]`·‖A_0‖∞`).  The degree-0
/// factorization fixes the sign convention `diag(R_0) > 0`, making the
/// result a deterministic function of the input.  The strictly lower
/// triangle of every `R` coefficient is exactly zero.
pub fn qr_pushforward(a: &UtpMatrix) -> Result<QrFactors> {
    let (m, n) = a.dim();
    assert!(m >= n, "qr_pushforward requires M >= N, got {m}×{n}");
    let deg = a.degree();

    let a0_norm = inf_norm(a.coeff(0));
    let (q0, r0) = householder_qr(a.coeff(0));
    let smallest = (0..n).map(|i| r0[[i, i]].abs()).fold(f64::INFINITY, f64::min);
    let threshold = RANK_TOL * a0_norm;
    if a0_norm == 0.0 || smallest < threshold {
        return Err(Error::RankDeficient { smallest, threshold });
    }
    let r0_top_inv = upper_tri_inverse(&r0.slice(s![..n, ..]).to_owned())?;

    let mut q = vec![q0];
    let mut r = vec![r0];
    for d in 1..deg {
        let (df, s_mat, x) = lift_step(&q, &r, a.coeff(d), &r0_top_inv);
        let sx = &s_mat + &x;
        let mut r_d = &q[0].t().dot(&df) - &sx.dot(&r[0]);
        // The lift solves P_L ∘ R_d = 0 analytically; store exact zeros.
        for i in 0..m {
            for j in 0..n.min(i) {
                r_d[[i, j]] = 0.0;
            }
        }
        let q_d = q[0].dot(&sx);
        q.push(q_d);
        r.push(r_d);
    }
    Ok(QrFactors {
        q: UtpMatrix::from_raw(q),
        r: UtpMatrix::from_raw(r),
    })
}

/// Reverse-mode rule for [`qr_pushforward`]: folds the adjoints
/// `(q̄, r̄)` of the factors back into an adjoint increment on `A`,
/// returning the new accumulator
///
/// ```text
/// ābar + Q ( R̄ + (P_L ∘ (R R̄ᵀ - R̄ Rᵀ + Qᵀ Q̄ - Q̄ᵀ Q)) R⁺ᵀ )
/// ```
///
/// evaluated in truncated Taylor arithmetic.  The supplied factors are
/// validated against the defining equations (residual at most
/// [`VALIDATION_TOL`]`·max(1, ‖A_0‖∞)`); use
/// [`qr_pullback_with_validation`] with `None` to skip that check.
pub fn qr_pullback(
    a: &UtpMatrix,
    factors: &QrFactors,
    abar: &UtpMatrix,
    qbar: &UtpMatrix,
    rbar: &UtpMatrix,
) -> Result<UtpMatrix> {
    qr_pullback_with_validation(a, factors, abar, qbar, rbar, Some(VALIDATION_TOL))
}

/// [`qr_pullback`] with an explicit validation tolerance (`None`
/// disables input validation entirely).
pub fn qr_pullback_with_validation(
    a: &UtpMatrix,
    factors: &QrFactors,
    abar: &UtpMatrix,
    qbar: &UtpMatrix,
    rbar: &UtpMatrix,
    residual_tol: Option<f64>,
) -> Result<UtpMatrix> {
    let q = &factors.q;
    let r = &factors.r;
    let (m, n) = a.dim();
    assert_eq!(q.dim(), (m, m), "Q must be square M×M");
    assert_eq!(r.dim(), (m, n), "R shape mismatch");
    assert_eq!(qbar.dim(), (m, m), "Q̄ shape mismatch");
    assert_eq!(rbar.dim(), (m, n), "R̄ shape mismatch");
    assert_eq!(abar.dim(), (m, n), "Ā shape mismatch");

    if let Some(tol) = residual_tol {
        let resid = residual_qr(a, q, r).max();
        let bound = tol * inf_norm(a.coeff(0)).max(1.0);
        if resid > bound {
            return Err(Error::InconsistentFactors { residual: resid, tol: bound });
        }
    }

    let qt = q.transpose();
    let rt = r.transpose();
    let k = &(&r.matmul(&rbar.transpose()) - &rbar.matmul(&rt))
        + &(&qt.matmul(qbar) - &qbar.transpose().matmul(q));
    let masked = k.hadamard(&SkeletalProjector::lower_strict(m, m));
    // R⁺ᵀ has zero rows below N, so only the first N columns of the
    // masked matrix contribute — the same gauge the pushforward uses.
    let rpt = r.pinv_tall()?.transpose();
    let inner = &rbar.clone() + &masked.matmul(&rpt);
    Ok(abar + &q.matmul(&inner))
}

/// Classical Householder-vector computation transcribed verbatim into
/// Taylor arithmetic, branches decided on zeroth coefficients.
///
/// Returns `(v, β)` with `v[0] = 1` such that `I - β v vᵀ` reflects `x`
/// onto a multiple of `e_1` — *when the branch decision is sound*.  If
/// the tail `σ = x_{1:}ᵀ x_{1:}` has zero leading coefficient the code
/// takes the `β = 0` shortcut even when `σ` is not identically zero,
/// which silently discards higher-order information.
pub fn householder_vector(x: &[UtpScalar]) -> (Vec<UtpScalar>, UtpScalar) {
    assert!(!x.is_empty(), "householder_vector needs a non-empty vector");
    let deg = x[0].degree();
    for xi in x {
        assert_eq!(xi.degree(), deg, "degree mismatch in householder_vector input");
    }

    // σ = Σ_{i>=1} x_i²
    let mut sigma = UtpScalar::zero(deg);
    for xi in &x[1..] {
        sigma = &sigma + &(xi * xi);
    }
    let mut v: Vec<UtpScalar> = Vec::with_capacity(x.len());
    v.push(UtpScalar::one(deg));
    v.extend(x[1..].iter().cloned());

    if sigma.coeff(0) == 0.0 {
        return (v, UtpScalar::zero(deg));
    }

    // In this branch σ's leading coefficient is a positive sum of squares,
    // so every intermediate division and square root below is defined.
    let x1 = &x[0];
    let mu = (&(x1 * x1) + &sigma).sqrt().expect("x1² + σ has positive leading coefficient");
    let v1 = if x1.coeff(0) <= 0.0 {
        x1 - &mu
    } else {
        (-&sigma).div(&(x1 + &mu)).expect("x1 + μ has positive leading coefficient")
    };
    let v1_sq = &v1 * &v1;
    let beta = v1_sq
        .scale(2.0)
        .div(&(&sigma + &v1_sq))
        .expect("σ + v1² has positive leading coefficient");
    for vi in v.iter_mut().skip(1) {
        *vi = vi.div(&v1).expect("v1 has nonzero leading coefficient");
    }
    (v, beta)
}

/// Reflector-based QR evaluated entirely in Taylor arithmetic via
/// [`householder_vector`], i.e. the straight AD transcription of the
/// classical algorithm.  Same shapes and sign convention as
/// [`qr_pushforward`] (square `Q`, `diag(R_0) >= 0`).
///
/// Correct when every branch decision is sound, but on inputs such as
/// `[x] = e₁ + e₂T` it returns an `R` whose higher coefficients are not
/// upper triangular — compare against [`qr_pushforward`] to see the
/// discrepancy.
pub fn householder_qr_taylor(a: &UtpMatrix) -> (UtpMatrix, UtpMatrix) {
    let (m, n) = a.dim();
    assert!(m >= n, "householder_qr_taylor requires M >= N");
    let deg = a.degree();

    // Work on grids of scalar polynomials.
    let mut r: Vec<Vec<UtpScalar>> = (0..m)
        .map(|i| (0..n).map(|j| a.entry(i, j)).collect())
        .collect();
    let mut q: Vec<Vec<UtpScalar>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { UtpScalar::one(deg) } else { UtpScalar::zero(deg) })
                .collect()
        })
        .collect();

    for j in 0..n {
        let col: Vec<UtpScalar> = (j..m).map(|i| r[i][j].clone()).collect();
        let (v, beta) = householder_vector(&col);
        // R[j.., j..] ← (I - β v vᵀ) R[j.., j..]
        for c in j..n {
            let mut w = UtpScalar::zero(deg);
            for i in j..m {
                w = &w + &(&v[i - j] * &r[i][c]);
            }
            let bw = &beta * &w;
            for i in j..m {
                r[i][c] = &r[i][c] - &(&bw * &v[i - j]);
            }
        }
        // Q ← Q (I - β v vᵀ)
        for row in 0..m {
            let mut w = UtpScalar::zero(deg);
            for i in j..m {
                w = &w + &(&q[row][i] * &v[i - j]);
            }
            let bw = &beta * &w;
            for i in j..m {
                q[row][i] = &q[row][i] - &(&bw * &v[i - j]);
            }
        }
    }

    // Match the sign convention of the lifted factorization.
    for j in 0..n {
        if r[j][j].coeff(0) < 0.0 {
            for c in j..n {
                r[j][c] = -&r[j][c];
            }
            for i in 0..m {
                q[i][j] = -&q[i][j];
            }
        }
    }

    let q_mat = UtpMatrix::from_scalar_grid(&q).expect("grid is rectangular");
    let r_mat = UtpMatrix::from_scalar_grid(&r).expect("grid is rectangular");
    (q_mat, r_mat)
}

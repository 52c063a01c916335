//! Forward and reverse derivatives of the real symmetric eigenvalue
//! decomposition in truncated Taylor arithmetic.
//!
//! For symmetric `[A]` of degree `D` we solve the defining equations
//!
//! ```text
//! 0 = Qᵀ A Q - Λ,    0 = QᵀQ - I,    0 = (P_L + P_R) ∘ Λ
//! ```
//!
//! coefficient by coefficient.  The subtlety relative to QR is that
//! eigenvalue curves may coincide to high order: when the degree-0
//! eigenvalues are repeated, the higher coefficients can only be *block*
//! diagonalized at first, and each block must be re-diagonalized at the
//! next Taylor coefficient where the curves separate.  [`eigh1`] performs
//! one such stage (diagonalize coefficient 0, block-diagonalize the
//! rest); [`eigh_pushforward`] sweeps stages over levels `d = 0, 1, …`
//! until every block is a singleton (or the degree is exhausted, in
//! which case the trailing coefficients remain block diagonal — the
//! relaxed solution).  [`qlift`] extends an orthogonal polynomial to a
//! higher degree, which is how each stage's rotation (valid only to its
//! own degree) is promoted to a full-degree factor.
//!
//! Eigenvalue order convention: ascending at degree 0, and within each
//! still-fused block ascending again at the coefficient where it splits.
//! Eigenvector signs are canonicalized at degree 0 (largest-magnitude
//! entry positive), making the whole decomposition a deterministic
//! function of the input.

use crate::error::{Error, Result};
use crate::linalg::{inf_norm, jacobi_eigh};
use crate::matrix::{BlockVector, SkeletalProjector, UtpMatrix};
use crate::oracles::residual_eigh;
use crate::scalar::UtpScalar;
use ndarray::Array2;

/// Two degree-0 eigenvalues closer than this are treated as members of
/// one block (a fused group of eigenvalue curves).
pub const DEFAULT_BLOCK_TOL: f64 = 1e-7;

/// Coefficients must be symmetric up to this relative tolerance; they
/// are exactly symmetrized on entry.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default relative tolerance for pullback input validation.
pub const VALIDATION_TOL: f64 = 1e-8;

/// Result of [`eigh_pushforward`].
///
/// `lam` is the (block-)diagonal eigenvalue polynomial, `q` the
/// orthogonal eigenvector polynomial, and `blocks` records the block
/// structure discovered at each level: `blocks[i]` (with
/// `level() == i+1`) partitions the eigenvalue curves still coincident
/// through coefficient `i`.  The last entry being all singletons means
/// the problem was fully diagonalized.
#[derive(Debug, Clone)]
pub struct EighFactors {
    pub lam: UtpMatrix,
    pub q: UtpMatrix,
    pub blocks: Vec<BlockVector>,
}

impl EighFactors {
    /// Diagonal of `lam` as scalar polynomials (the eigenvalue curves).
    pub fn eigenvalues(&self) -> Vec<UtpScalar> {
        (0..self.lam.nrows()).map(|i| self.lam.entry(i, i)).collect()
    }

    pub fn final_blocks(&self) -> &BlockVector {
        self.blocks.last().expect("pushforward records at least one level")
    }

    /// Whether every eigenvalue curve was separated from every other,
    /// i.e. `lam` is diagonal through all coefficients.
    pub fn fully_diagonalized(&self) -> bool {
        self.final_blocks().all_singleton()
    }
}

/// Groups a non-decreasing sequence of eigenvalues into blocks: values
/// whose consecutive gap is below `tol` are fused (so distinct blocks
/// are separated by at least `tol`).  Fails on a decreasing sequence.
pub fn detect_blocks(values: &[f64], tol: f64, level: usize) -> Result<BlockVector> {
    assert!(!values.is_empty(), "detect_blocks needs at least one value");
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Unsorted);
    }
    let mut boundaries = vec![0];
    for i in 1..values.len() {
        if values[i] - values[i - 1] >= tol {
            boundaries.push(i);
        }
    }
    boundaries.push(values.len());
    Ok(BlockVector::new(boundaries, level))
}

fn check_and_symmetrize(a: &UtpMatrix) -> Result<UtpMatrix> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "symmetric eigendecomposition needs a square matrix");
    let scale = a.coeff_inf_norms().into_iter().fold(1.0, f64::max);
    let tol = SYMMETRY_TOL * scale;
    let asym = a.asymmetry();
    if asym > tol {
        return Err(Error::NotSymmetric { norm: asym, tol });
    }
    Ok(a.symmetrize())
}

/// One stage of the lifted eigendecomposition: diagonalizes the degree-0
/// coefficient and *block*-diagonalizes all higher coefficients with
/// respect to the groups of repeated degree-0 eigenvalues.
///
/// Returns `(Λ, Q, b)` where `Λ_0` is diagonal (ascending), every higher
/// `Λ_d` is exactly zero outside the diagonal blocks of `b`, and `Q` is
/// orthogonal with `QᵀAQ = Λ` through the full degree.
pub fn eigh1(a: &UtpMatrix, block_tol: f64) -> Result<(UtpMatrix, UtpMatrix, BlockVector)> {
    let sym = check_and_symmetrize(a)?;
    let n = sym.nrows();
    let deg = sym.degree();

    let (lam0, q0) = jacobi_eigh(sym.coeff(0))?;
    let blocks = detect_blocks(lam0.as_slice().unwrap(), block_tol, 1)?;
    let on = SkeletalProjector::on_blocks(&blocks);
    let off = SkeletalProjector::off_blocks(&blocks);

    // Reciprocal gap matrix on the off-block entries; the off-block gaps
    // are at least block_tol by construction, and e[j,i] = -e[i,j]
    // exactly, so h is exactly antisymmetric.
    let mut h = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if off.mask()[[i, j]] == 1.0 {
                h[[i, j]] = 1.0 / (lam0[j] - lam0[i]);
            }
        }
    }

    let lam0_mat = Array2::from_diag(&lam0);
    let mut q = vec![q0];
    let mut lam = vec![lam0_mat.clone()];
    for d in 1..deg {
        // ΔF: coefficient d of QᵀAQ using only already-known coefficients
        // (every multi-index component at most d-1).
        let mut df = Array2::<f64>::zeros((n, n));
        for i1 in 0..d {
            for i2 in 0..=(d - i1) {
                let i3 = d - i1 - i2;
                if i2 == d || i3 == d {
                    continue;
                }
                df = &df + &q[i1].t().dot(sym.coeff(i2)).dot(&q[i3]);
            }
        }
        // S = -½ Σ_{k=1}^{d-1} Q_{d-k}ᵀ Q_k, exactly symmetrized.
        let mut s_raw = Array2::<f64>::zeros((n, n));
        for k in 1..d {
            s_raw = &s_raw + &q[d - k].t().dot(&q[k]);
        }
        s_raw *= -0.5;
        let s_mat = (&s_raw + &s_raw.t()) * 0.5;

        let k_raw = &(&df + &q[0].t().dot(sym.coeff(d)).dot(&q[0]))
            + &(&s_mat.dot(&lam0_mat) + &lam0_mat.dot(&s_mat));
        let k_mat = (&k_raw + &k_raw.t()) * 0.5;

        let q_d = q[0].dot(&(&s_mat + &(&h * &k_mat)));
        let lam_d = on.apply(&k_mat);
        q.push(q_d);
        lam.push(lam_d);
    }
    Ok((UtpMatrix::from_raw(lam), UtpMatrix::from_raw(q), blocks))
}

/// Extends an orthogonal matrix polynomial to `target_degree` while
/// keeping `QᵀQ = I` through the extended degree:
/// `Q_k = -½ Q_0 Σ_{i=1}^{k-1} Q_iᵀ Q_{k-i}` for the new coefficients.
///
/// The input must satisfy orthogonality through its own degree and
/// `target_degree >= q.degree()`; equal degrees return a copy (so the
/// operation is idempotent).
pub fn qlift(q: &UtpMatrix, target_degree: usize) -> Result<UtpMatrix> {
    let n = q.nrows();
    assert_eq!(n, q.ncols(), "qlift needs a square polynomial");
    assert!(
        target_degree >= q.degree(),
        "qlift target degree {} below input degree {}",
        target_degree,
        q.degree()
    );
    let resid = (&q.transpose().matmul(q) - &UtpMatrix::identity(n, q.degree()))
        .coeff_inf_norms()
        .into_iter()
        .fold(0.0, f64::max);
    let tol = 1e-8 * q.max_abs().powi(2).max(1.0);
    if resid > tol {
        return Err(Error::NotOrthogonal { residual: resid, tol });
    }

    let mut coeffs = q.coeffs().to_vec();
    for k in q.degree()..target_degree {
        let mut g = Array2::<f64>::zeros((n, n));
        for i in 1..k {
            g = &g + &coeffs[i].t().dot(&coeffs[k - i]);
        }
        coeffs.push(coeffs[0].dot(&g) * -0.5);
    }
    Ok(UtpMatrix::from_raw(coeffs))
}

/// Full lifted eigendecomposition: sweeps [`eigh1`] stages over levels,
/// splitting fused eigenvalue groups at the Taylor coefficient where
/// their curves separate (gap at least `block_tol`), and composing the
/// per-stage rotations.  Stops early once all blocks are singletons.
///
/// If some curves coincide through every computed coefficient, the
/// corresponding `lam` entries stay block diagonal past the last level
/// reached — inspect [`EighFactors::blocks`] to see what remained fused.
pub fn eigh_pushforward(a: &UtpMatrix, block_tol: f64) -> Result<EighFactors> {
    let sym = check_and_symmetrize(a)?;
    let n = sym.nrows();
    let deg = sym.degree();

    let mut lam = sym;
    let mut q = UtpMatrix::identity(n, deg);
    let mut blocks = BlockVector::trivial(n, 0);
    let mut history: Vec<BlockVector> = Vec::new();

    for d in 0..deg {
        let mut rot = UtpMatrix::identity(n, deg);
        let mut new_lam = lam.clone();
        for c in d..deg {
            new_lam.coeffs_mut()[c].fill(0.0);
        }
        let mut new_boundaries = vec![0];

        for s in blocks.blocks() {
            if s.len() == 1 {
                // Singleton: the windowed 1×1 stage is the identity; the
                // eigenvalue coefficients pass through unchanged.
                for c in d..deg {
                    new_lam.coeffs_mut()[c][[s.start, s.start]] = lam.coeff(c)[[s.start, s.start]];
                }
                new_boundaries.push(s.end);
                continue;
            }
            let sub = lam.submatrix(s.clone(), s.clone()).window(d, deg);
            let (lam_hat, q_hat, sub_blocks) = eigh1(&sub, block_tol)?;
            let q_full = qlift(&q_hat, deg)?;
            rot = rot.with_submatrix(s.clone(), s.clone(), &q_full);
            for (j, c) in (d..deg).enumerate() {
                let dst = &mut new_lam.coeffs_mut()[c];
                let src = lam_hat.coeff(j);
                for (bi, i) in s.clone().enumerate() {
                    for (bj, jj) in s.clone().enumerate() {
                        dst[[i, jj]] = src[[bi, bj]];
                    }
                }
            }
            for &w in &sub_blocks.boundaries()[1..] {
                new_boundaries.push(s.start + w);
            }
        }

        lam = new_lam;
        q = q.matmul(&rot);
        blocks = BlockVector::new(new_boundaries, d + 1);
        history.push(blocks.clone());
        if blocks.all_singleton() {
            break;
        }
    }

    Ok(EighFactors { lam, q, blocks: history })
}

/// Reverse-mode rule for the eigendecomposition, valid only when the
/// degree-0 eigenvalues are pairwise distinct (gap at least `1e-7` by
/// default): returns the new accumulator
///
/// ```text
/// ābar + Q (Λ̄ + H ∘ (Qᵀ Q̄)) Qᵀ,    H_ij = ([λ_j] - [λ_i])⁻¹ (i ≠ j)
/// ```
///
/// in truncated Taylor arithmetic, with `H`'s reciprocals lifted as
/// polynomial inverses.  `lambar` is the adjoint of the diagonal
/// eigenvalue matrix; since `Λ` is structurally diagonal, only the
/// diagonal of `lambar` is used (off-diagonal entries are ignored).
/// The result pairs correctly with *symmetric* perturbations of `a`; it
/// is not itself symmetrized.  Inputs are validated against the
/// defining equations; near-degenerate spectra are rejected rather than
/// silently amplifying the `H` entries.
pub fn eigh_pullback(
    a: &UtpMatrix,
    q: &UtpMatrix,
    lam: &UtpMatrix,
    abar: &UtpMatrix,
    qbar: &UtpMatrix,
    lambar: &UtpMatrix,
) -> Result<UtpMatrix> {
    eigh_pullback_with_tolerances(a, q, lam, abar, qbar, lambar, Some(VALIDATION_TOL), DEFAULT_BLOCK_TOL)
}

/// [`eigh_pullback`] with explicit tolerances: `residual_tol = None`
/// disables defining-equation validation; `gap_tol` is the minimum
/// admissible eigenvalue gap.
#[allow(clippy::too_many_arguments)]
pub fn eigh_pullback_with_tolerances(
    a: &UtpMatrix,
    q: &UtpMatrix,
    lam: &UtpMatrix,
    abar: &UtpMatrix,
    qbar: &UtpMatrix,
    lambar: &UtpMatrix,
    residual_tol: Option<f64>,
    gap_tol: f64,
) -> Result<UtpMatrix> {
    let n = a.nrows();
    for (mat, name) in [
        (a, "a"),
        (q, "q"),
        (lam, "lam"),
        (abar, "abar"),
        (qbar, "qbar"),
        (lambar, "lambar"),
    ] {
        assert_eq!(mat.dim(), (n, n), "{name} must be N×N");
        assert_eq!(mat.degree(), a.degree(), "{name} degree mismatch");
    }

    let lam0 = lam.coeff(0);
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_gap = min_gap.min((lam0[[j, j]] - lam0[[i, i]]).abs());
        }
    }
    if n > 1 && min_gap < gap_tol {
        return Err(Error::RepeatedEigenvalues { gap: min_gap, tol: gap_tol });
    }
    if let Some(tol) = residual_tol {
        let resid = residual_eigh(a, q, lam).max();
        let bound = tol * inf_norm(a.coeff(0)).max(1.0);
        if resid > bound {
            return Err(Error::InconsistentFactors { residual: resid, tol: bound });
        }
    }

    // H lifted entrywise: the (i,j) entry is the polynomial reciprocal of
    // [λ_j] - [λ_i], whose leading coefficient is the (nonzero) gap.
    let deg = a.degree();
    let mut h_grid: Vec<Vec<UtpScalar>> = Vec::with_capacity(n);
    for i in 0..n {
        let li = lam.entry(i, i);
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            if i == j {
                row.push(UtpScalar::zero(deg));
            } else {
                let diff = &lam.entry(j, j) - &li;
                row.push(diff.recip().expect("gap check guarantees nonzero leading coefficient"));
            }
        }
        h_grid.push(row);
    }
    let h = UtpMatrix::from_scalar_grid(&h_grid).expect("grid is rectangular");

    let lambar_diag = lambar.hadamard(&SkeletalProjector::diagonal(n, n));
    let inner = &lambar_diag + &h.hadamard_mul(&q.transpose().matmul(qbar));
    Ok(abar + &q.matmul(&inner).matmul(&q.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use ndarray::array;

    fn poly(coeffs: Vec<Array2<f64>>) -> UtpMatrix {
        UtpMatrix::from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn detect_blocks_fuses_below_tolerance() {
        let b = detect_blocks(&[1.0, 1.0 + 1e-9, 2.0], 1e-7, 1).unwrap();
        assert_eq!(b.boundaries(), &[0, 2, 3]);
        let b = detect_blocks(&[0.5, 1.0, 2.0], 1e-7, 1).unwrap();
        assert!(b.all_singleton());
        let b = detect_blocks(&[3.0, 3.0, 3.0], 1e-7, 1).unwrap();
        assert_eq!(b.num_blocks(), 1);
        assert_eq!(detect_blocks(&[2.0, 1.0], 1e-7, 1), Err(Error::Unsorted));
    }

    #[test]
    fn eigh1_sorts_a_constant_diagonal() {
        let a = UtpMatrix::constant(Array2::from_diag(&ndarray::arr1(&[3.0, 1.0, 2.0])), 2);
        let (lam, q, b) = eigh1(&a, DEFAULT_BLOCK_TOL).unwrap();
        assert!(b.all_singleton());
        assert_eq!(lam.coeff(0)[[0, 0]], 1.0);
        assert_eq!(lam.coeff(0)[[1, 1]], 2.0);
        assert_eq!(lam.coeff(0)[[2, 2]], 3.0);
        // Q is the permutation sending sorted positions to originals.
        let resid = residual_eigh(&a, &q, &lam);
        assert!(resid.max() < 1e-13, "{:?}", resid);
    }

    #[test]
    fn eigh1_first_order_perturbation_oracle() {
        // For [A] = [A_0, A_1] with distinct spectrum: Λ_1 = diag(q_iᵀA_1q_i)
        // and Q_1 = Q_0 (H ∘ (Q_0ᵀ A_1 Q_0)) — classical first-order
        // perturbation theory, computed here with plain dense ops.
        let a0 = array![[2.0, 0.4, -0.1], [0.4, -1.0, 0.3], [-0.1, 0.3, 0.7]];
        let a1 = array![[0.5, 0.2, 0.8], [0.2, -0.3, 0.1], [0.8, 0.1, 1.2]];
        let a = poly(vec![a0.clone(), a1.clone()]);
        let (lam, q, _) = eigh1(&a, DEFAULT_BLOCK_TOL).unwrap();

        let q0 = q.coeff(0);
        let k = q0.t().dot(&a1).dot(q0);
        for i in 0..3 {
            assert!((lam.coeff(1)[[i, i]] - k[[i, i]]).abs() < 1e-12);
        }
        let mut hk = k.clone();
        for i in 0..3 {
            for j in 0..3 {
                hk[[i, j]] = if i == j {
                    0.0
                } else {
                    k[[i, j]] / (lam.coeff(0)[[j, j]] - lam.coeff(0)[[i, i]])
                };
            }
        }
        let q1_expected = q0.dot(&hk);
        assert!(inf_norm(&(q.coeff(1) - &q1_expected)) < 1e-12);
    }

    #[test]
    fn eigh1_rejects_asymmetric_input() {
        let a = poly(vec![array![[1.0, 2.0], [0.0, 1.0]]]);
        assert!(matches!(eigh1(&a, DEFAULT_BLOCK_TOL), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eigh1_block_diagonalizes_repeated_spectrum() {
        // A_0 has a double eigenvalue; Λ_1 may be block diagonal but its
        // off-block entries must be exactly zero.
        let a0 = Array2::from_diag(&ndarray::arr1(&[1.0, 1.0, 4.0]));
        let a1 = array![[0.3, 0.7, 0.2], [0.7, -0.4, 0.5], [0.2, 0.5, 1.0]];
        let a = poly(vec![a0, a1]);
        let (lam, q, b) = eigh1(&a, DEFAULT_BLOCK_TOL).unwrap();
        assert_eq!(b.boundaries(), &[0, 2, 3]);
        assert_eq!(lam.coeff(1)[[0, 2]], 0.0);
        assert_eq!(lam.coeff(1)[[2, 0]], 0.0);
        let resid = residual_eigh(&a, &q, &lam);
        // Similarity and orthogonality hold; diagonality only blockwise.
        assert!(resid.similarity.iter().cloned().fold(0.0, f64::max) < 1e-13);
        assert!(resid.orthogonality.iter().cloned().fold(0.0, f64::max) < 1e-13);
    }

    #[test]
    fn qlift_constant_orthogonal_stays_constant() {
        let theta = 0.3f64;
        let rot = array![[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]];
        let q = UtpMatrix::constant(rot, 1);
        let lifted = qlift(&q, 3).unwrap();
        assert_eq!(lifted.degree(), 3);
        assert!(max_abs(lifted.coeff(1)) == 0.0 && max_abs(lifted.coeff(2)) == 0.0);
        // Idempotent: lifting an already-lifted polynomial changes nothing.
        assert!(qlift(&lifted, 3).unwrap().max_abs_diff(&lifted) == 0.0);
    }

    #[test]
    fn qlift_restores_orthogonality_to_target_degree() {
        // Take the orthogonal factor of a degree-2 problem, lift to 5.
        let g = array![[0.0, 0.4], [0.4, 0.0]];
        let a = poly(vec![array![[1.0, 0.0], [0.0, 2.0]], g]);
        let (_, q, _) = eigh1(&a, DEFAULT_BLOCK_TOL).unwrap();
        let lifted = qlift(&q, 5).unwrap();
        let resid = (&lifted.transpose().matmul(&lifted) - &UtpMatrix::identity(2, 5))
            .coeff_inf_norms()
            .into_iter()
            .fold(0.0, f64::max);
        assert!(resid < 1e-12, "orthogonality residual {resid}");
    }

    #[test]
    fn qlift_rejects_non_orthogonal_input() {
        let q = UtpMatrix::constant(array![[1.0, 0.0], [0.0, 2.0]], 1);
        assert!(matches!(qlift(&q, 2), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn pushforward_order_one_is_classical_eigh() {
        let g = array![[2.0, 0.5, 0.1], [0.5, -1.0, 0.4], [0.1, 0.4, 0.9]];
        let a = UtpMatrix::constant(g.clone(), 1);
        let f = eigh_pushforward(&a, DEFAULT_BLOCK_TOL).unwrap();
        let (lam0, q0) = jacobi_eigh(&g).unwrap();
        assert!(inf_norm(&(f.q.coeff(0) - &q0)) < 1e-13);
        for i in 0..3 {
            assert!((f.lam.coeff(0)[[i, i]] - lam0[i]).abs() < 1e-13);
        }
        assert!(f.fully_diagonalized());
    }

    #[test]
    fn pushforward_distinct_spectrum_diagonalizes_fully() {
        let a = poly(vec![
            array![[1.0, 0.2], [0.2, 3.0]],
            array![[0.5, -0.3], [-0.3, 0.1]],
            array![[0.0, 1.0], [1.0, 0.7]],
        ]);
        let f = eigh_pushforward(&a, DEFAULT_BLOCK_TOL).unwrap();
        assert_eq!(f.blocks.len(), 1, "one level suffices for a distinct spectrum");
        assert!(f.fully_diagonalized());
        let resid = residual_eigh(&a, &f.q, &f.lam);
        assert!(resid.max() < 1e-12, "{:?}", resid);
    }

    #[test]
    fn pushforward_one_by_one_is_identity() {
        let a = poly(vec![array![[2.0]], array![[-0.5]], array![[1.0]]]);
        let f = eigh_pushforward(&a, DEFAULT_BLOCK_TOL).unwrap();
        assert!(f.lam.max_abs_diff(&a) == 0.0);
        assert!(f.q.max_abs_diff(&UtpMatrix::identity(1, 3)) == 0.0);
    }

    #[test]
    fn pullback_identity_example() {
        // A = diag(1,2) constant: Q = I, Λ = A; with Λ̄ = I, Q̄ = 0 the
        // adjoint increment is exactly the identity.
        let a = UtpMatrix::constant(Array2::from_diag(&ndarray::arr1(&[1.0, 2.0])), 1);
        let f = eigh_pushforward(&a, DEFAULT_BLOCK_TOL).unwrap();
        let abar = eigh_pullback(
            &a,
            &f.q,
            &f.lam,
            &UtpMatrix::zeros(2, 2, 1),
            &UtpMatrix::zeros(2, 2, 1),
            &UtpMatrix::identity(2, 1),
        )
        .unwrap();
        assert!(abar.max_abs_diff(&UtpMatrix::identity(2, 1)) < 1e-14);
    }

    #[test]
    fn pullback_rejects_repeated_eigenvalues() {
        let a = UtpMatrix::constant(Array2::eye(2), 1);
        let f = eigh_pushforward(&a, DEFAULT_BLOCK_TOL).unwrap();
        let z = UtpMatrix::zeros(2, 2, 1);
        assert!(matches!(
            eigh_pullback(&a, &f.q, &f.lam, &z, &z, &z),
            Err(Error::RepeatedEigenvalues { .. })
        ));
    }

    #[test]
    fn pullback_validates_factors() {
        let a = UtpMatrix::constant(array![[1.0, 0.1], [0.1, 2.0]], 1);
        let f = eigh_pushforward(&a, DEFAULT_BLOCK_TOL).unwrap();
        let z = UtpMatrix::zeros(2, 2, 1);
        let bad_q = f.q.scale(1.01);
        assert!(matches!(
            eigh_pullback(&a, &bad_q, &f.lam, &z, &z, &z),
            Err(Error::InconsistentFactors { .. })
        ));
        assert!(eigh_pullback_with_tolerances(
            &a, &bad_q, &f.lam, &z, &z, &z, None, DEFAULT_BLOCK_TOL
        )
        .is_ok());
    }
}

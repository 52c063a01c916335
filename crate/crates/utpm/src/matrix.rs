//! Truncated Taylor polynomials with dense matrix coefficients, plus the
//! two combinatorial helpers the factorization lifts are built from:
//! skeletal (0/1 Hadamard) projectors and block partitions of an index
//! range.
//!
//! A [`UtpMatrix`] of degree `D` stores `D` real `M×N` coefficient
//! matrices `[A_0, …, A_{D-1}]` representing `A(T) = Σ A_d T^d mod T^D`.
//! Ring operations lift entrywise or by truncated convolution
//! ([`UtpMatrix::matmul`]).  As with [`UtpScalar`](crate::scalar::UtpScalar),
//! degrees and shapes are fixed per value; mismatches panic, and degree
//! changes are explicit ([`UtpMatrix::window`]).  All methods return new
//! values; nothing mutates in place.

use crate::error::{Error, Result};
use crate::linalg::{inf_norm, upper_tri_inverse};
use crate::scalar::UtpScalar;
use ndarray::{Array2, s};
use std::ops::{Add, Neg, Range, Sub};

/// Contiguous partition of `0..n()` into blocks, used to describe groups
/// of coincident eigenvalues.  Stored as the boundary sequence
/// `0 = b_0 < b_1 < … < b_K = n`; block `i` is `b_i..b_{i+1}`.
///
/// The `level` records at which Taylor coefficient the partition became
/// valid (block `i` groups eigenvalue curves still coincident in all
/// coefficients below `level`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockVector {
    boundaries: Vec<usize>,
    level: usize,
}

impl BlockVector {
    /// Builds a partition from its boundary sequence.  Panics unless the
    /// boundaries are strictly increasing, start at 0, and end at the
    /// total size.
    pub fn new(boundaries: Vec<usize>, level: usize) -> Self {
        assert!(boundaries.len() >= 2, "need at least one block");
        assert_eq!(boundaries[0], 0, "partition must start at 0");
        assert!(
            boundaries.windows(2).all(|w| w[0] < w[1]),
            "boundaries must be strictly increasing"
        );
        Self { boundaries, level }
    }

    /// The single block `0..n`.
    pub fn trivial(n: usize, level: usize) -> Self {
        Self::new(vec![0, n], level)
    }

    /// All singleton blocks.
    pub fn singletons(n: usize, level: usize) -> Self {
        Self::new((0..=n).collect(), level)
    }

    pub fn n(&self) -> usize {
        *self.boundaries.last().unwrap()
    }

    pub fn num_blocks(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn block(&self, i: usize) -> Range<usize> {
        self.boundaries[i]..self.boundaries[i + 1]
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.num_blocks()).map(|i| self.block(i))
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn all_singleton(&self) -> bool {
        self.num_blocks() == self.n()
    }
}

/// A 0/1 mask applied by Hadamard product — the "skeletal projectors"
/// that pick out the strictly lower / strictly upper / diagonal part of a
/// matrix, or the on-/off-block pattern of a [`BlockVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletalProjector {
    mask: Array2<f64>,
}

impl SkeletalProjector {
    /// Ones strictly below the diagonal (`i > j`).
    pub fn lower_strict(m: usize, n: usize) -> Self {
        Self {
            mask: Array2::from_shape_fn((m, n), |(i, j)| if i > j { 1.0 } else { 0.0 }),
        }
    }

    /// Ones strictly above the diagonal (`i < j`).
    pub fn upper_strict(m: usize, n: usize) -> Self {
        Self {
            mask: Array2::from_shape_fn((m, n), |(i, j)| if i < j { 1.0 } else { 0.0 }),
        }
    }

    /// Ones on the diagonal (`i == j`).
    pub fn diagonal(m: usize, n: usize) -> Self {
        Self {
            mask: Array2::from_shape_fn((m, n), |(i, j)| if i == j { 1.0 } else { 0.0 }),
        }
    }

    /// Ones inside the diagonal blocks of the partition, zero elsewhere.
    pub fn on_blocks(bv: &BlockVector) -> Self {
        let n = bv.n();
        let mut mask = Array2::zeros((n, n));
        for b in bv.blocks() {
            for i in b.clone() {
                for j in b.clone() {
                    mask[[i, j]] = 1.0;
                }
            }
        }
        Self { mask }
    }

    /// Ones outside the diagonal blocks — the complement of
    /// [`SkeletalProjector::on_blocks`]; the two masks sum to all-ones.
    pub fn off_blocks(bv: &BlockVector) -> Self {
        let on = Self::on_blocks(bv);
        Self {
            mask: on.mask.mapv(|v| 1.0 - v),
        }
    }

    pub fn mask(&self) -> &Array2<f64> {
        &self.mask
    }

    pub fn dim(&self) -> (usize, usize) {
        self.mask.dim()
    }

    /// Mask a single dense coefficient.
    pub fn apply(&self, a: &Array2<f64>) -> Array2<f64> {
        assert_eq!(self.mask.dim(), a.dim(), "projector shape mismatch");
        &self.mask * a
    }
}

/// Matrix-valued truncated Taylor polynomial; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct UtpMatrix {
    coeffs: Vec<Array2<f64>>,
}

impl UtpMatrix {
    /// Wraps coefficient matrices `[A_0, …, A_{D-1}]`.  Fails if the list
    /// is empty, shapes are inconsistent, or any entry is non-finite.
    pub fn from_coeffs(coeffs: Vec<Array2<f64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::NonFinite);
        }
        let dim = coeffs[0].dim();
        for c in &coeffs {
            if c.dim() != dim {
                return Err(Error::NonFinite);
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_raw(coeffs: Vec<Array2<f64>>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    /// Polynomial whose only nonzero coefficient is `A_0 = a`.
    pub fn constant(a: Array2<f64>, degree: usize) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        let dim = a.dim();
        let mut coeffs = vec![a];
        coeffs.resize(degree, Array2::zeros(dim));
        Self { coeffs }
    }

    pub fn zeros(m: usize, n: usize, degree: usize) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        Self {
            coeffs: vec![Array2::zeros((m, n)); degree],
        }
    }

    pub fn identity(n: usize, degree: usize) -> Self {
        Self::constant(Array2::eye(n), degree)
    }

    /// Assembles a matrix polynomial from a rectangular grid of scalar
    /// polynomials (all the same degree).
    pub fn from_scalar_grid(grid: &[Vec<UtpScalar>]) -> Result<Self> {
        if grid.is_empty() || grid[0].is_empty() {
            return Err(Error::NonFinite);
        }
        let m = grid.len();
        let n = grid[0].len();
        let degree = grid[0][0].degree();
        let mut coeffs = vec![Array2::zeros((m, n)); degree];
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonFinite);
            }
            for (j, s) in row.iter().enumerate() {
                assert_eq!(s.degree(), degree, "degree mismatch in scalar grid");
                for d in 0..degree {
                    coeffs[d][[i, j]] = s.coeff(d);
                }
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn nrows(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn ncols(&self) -> usize {
        self.coeffs[0].ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.coeffs[0].dim()
    }

    pub fn coeff(&self, d: usize) -> &Array2<f64> {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[Array2<f64>] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Array2<f64>] {
        &mut self.coeffs
    }

    /// The scalar polynomial at position `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> UtpScalar {
        UtpScalar::from_raw(self.coeffs.iter().map(|c| c[[i, j]]).collect())
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "shape mismatch");
        assert_eq!(
            self.degree(),
            other.degree(),
            "degree mismatch: {} vs {}",
            self.degree(),
            other.degree()
        );
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_raw(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Truncated convolution of matrix products:
    /// `C_e = Σ_{d=0}^{e} A_d · B_{e-d}`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.ncols(),
            rhs.nrows(),
            "matmul shape mismatch: {:?} × {:?}",
            self.dim(),
            rhs.dim()
        );
        assert_eq!(
            self.degree(),
            rhs.degree(),
            "degree mismatch: {} vs {}",
            self.degree(),
            rhs.degree()
        );
        let deg = self.degree();
        let mut out = vec![Array2::zeros((self.nrows(), rhs.ncols())); deg];
        for e in 0..deg {
            for d in 0..=e {
                out[e] = &out[e] + &self.coeffs[d].dot(&rhs.coeffs[e - d]);
            }
        }
        Self::from_raw(out)
    }

    /// Coefficient-wise transpose: `(Aᵀ)_d = (A_d)ᵀ`.
    pub fn transpose(&self) -> Self {
        Self::from_raw(self.coeffs.iter().map(|c| c.t().to_owned()).collect())
    }

    /// Hadamard product with a 0/1 mask, applied to every coefficient.
    pub fn hadamard(&self, p: &SkeletalProjector) -> Self {
        assert_eq!(p.dim(), self.dim(), "projector shape mismatch");
        Self::from_raw(self.coeffs.iter().map(|c| p.apply(c)).collect())
    }

    /// Entrywise truncated product of two matrix polynomials:
    /// `(A ∘ B)_e[i,j] = Σ_{d} A_d[i,j]·B_{e-d}[i,j]`.
    pub fn hadamard_mul(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        let deg = self.degree();
        let mut out = vec![Array2::zeros(self.dim()); deg];
        for e in 0..deg {
            for d in 0..=e {
                out[e] = &out[e] + &(&self.coeffs[d] * &rhs.coeffs[e - d]);
            }
        }
        Self::from_raw(out)
    }

    /// Inverse of a square upper-triangular polynomial (every coefficient
    /// upper triangular, nonsingular diagonal in the leading one).
    ///
    /// `B_0 = R_0⁻¹`, then `B_d = -B_0 Σ_{k=1}^{d} R_k B_{d-k}` from
    /// matching coefficients in `R·B = I`.
    pub fn tri_inverse(&self) -> Result<Self> {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "tri_inverse requires a square matrix");
        for c in &self.coeffs {
            for i in 0..n {
                for j in 0..i {
                    assert_eq!(c[[i, j]], 0.0, "tri_inverse input must be upper triangular");
                }
            }
        }
        let b0 = upper_tri_inverse(&self.coeffs[0])?;
        let deg = self.degree();
        let mut out = vec![b0; 1];
        for d in 1..deg {
            let mut s = Array2::<f64>::zeros((n, n));
            for k in 1..=d {
                s = &s + &self.coeffs[k].dot(&out[d - k]);
            }
            out.push(-out[0].dot(&s));
        }
        Ok(Self::from_raw(out))
    }

    /// Pseudo-inverse of a tall upper-triangular polynomial `R` (`M×N`,
    /// `M >= N`, rows below the top square block all zero):
    /// `R⁺ = (R_topᵀ⁻¹ style) = [R_top⁻¹ | 0]`, an `N×M` polynomial with
    /// `R⁺ R = I_N`.
    pub fn pinv_tall(&self) -> Result<Self> {
        let (m, n) = self.dim();
        assert!(m >= n, "pinv_tall requires M >= N, got {m}×{n}");
        let scale = self.coeffs.iter().map(inf_norm).fold(1.0, f64::max);
        let tol = 1e-8 * scale;
        let mut bottom = 0.0f64;
        for c in &self.coeffs {
            if m > n {
                bottom = bottom.max(inf_norm(&c.slice(s![n.., ..]).to_owned()));
            }
        }
        if bottom > tol {
            return Err(Error::NonzeroBottomRows { norm: bottom });
        }
        let top_inv = self.submatrix(0..n, 0..n).tri_inverse()?;
        let mut out = Vec::with_capacity(self.degree());
        for c in top_inv.coeffs() {
            let mut padded = Array2::zeros((n, m));
            padded.slice_mut(s![.., ..n]).assign(c);
            out.push(padded);
        }
        Ok(Self::from_raw(out))
    }

    /// Coefficients `[lo, hi)` as a new polynomial of degree `hi - lo`.
    pub fn window(&self, lo: usize, hi: usize) -> Self {
        assert!(lo < hi && hi <= self.degree(), "window out of range");
        Self::from_raw(self.coeffs[lo..hi].to_vec())
    }

    /// The sub-polynomial of entries `rows × cols`, every coefficient.
    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        assert!(rows.start < rows.end && rows.end <= self.nrows(), "row range out of bounds");
        assert!(cols.start < cols.end && cols.end <= self.ncols(), "column range out of bounds");
        Self::from_raw(
            self.coeffs
                .iter()
                .map(|c| c.slice(s![rows.clone(), cols.clone()]).to_owned())
                .collect(),
        )
    }

    /// Returns a copy with the given block overwritten by `block`
    /// (which must have matching degree and the shape of the range).
    pub fn with_submatrix(&self, rows: Range<usize>, cols: Range<usize>, block: &Self) -> Self {
        assert_eq!(block.degree(), self.degree(), "degree mismatch");
        assert_eq!(
            block.dim(),
            (rows.end - rows.start, cols.end - cols.start),
            "block shape does not match target range"
        );
        let mut out = self.clone();
        for (c, b) in out.coeffs.iter_mut().zip(block.coeffs()) {
            c.slice_mut(s![rows.clone(), cols.clone()]).assign(b);
        }
        out
    }

    /// Trace pairing `⟨X, Y⟩ = tr(Xᵀ Y)` lifted to polynomials:
    /// coefficient `e` is `Σ_{d+k=e} tr(X_dᵀ Y_k)`.
    pub fn trace_pair(&self, rhs: &Self) -> UtpScalar {
        self.check_same(rhs);
        let deg = self.degree();
        let mut out = vec![0.0; deg];
        for e in 0..deg {
            for d in 0..=e {
                out[e] += (&self.coeffs[d] * &rhs.coeffs[e - d]).sum();
            }
        }
        UtpScalar::from_raw(out)
    }

    /// Per-coefficient ∞-norms, mostly for residual reporting.
    pub fn coeff_inf_norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(inf_norm).collect()
    }

    /// Largest absolute entry across all coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest absolute entrywise difference across all coefficients.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.check_same(rhs);
        self.coeffs
            .iter()
            .zip(rhs.coeffs())
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    /// Coefficient-wise symmetrization `(A + Aᵀ)/2`.
    pub fn symmetrize(&self) -> Self {
        Self::from_raw(
            self.coeffs
                .iter()
                .map(|c| (c + &c.t().to_owned()) * 0.5)
                .collect(),
        )
    }

    /// Largest asymmetry `‖A_d - A_dᵀ‖∞` over all coefficients.
    pub fn asymmetry(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| inf_norm(&(c - &c.t().to_owned())))
            .fold(0.0, f64::max)
    }
}

impl Add for &UtpMatrix {
    type Output = UtpMatrix;
    fn add(self, rhs: &UtpMatrix) -> UtpMatrix {
        self.check_same(rhs);
        UtpMatrix::from_raw(
            self.coeffs
                .iter()
                .zip(rhs.coeffs())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &UtpMatrix {
    type Output = UtpMatrix;
    fn sub(self, rhs: &UtpMatrix) -> UtpMatrix {
        self.check_same(rhs);
        UtpMatrix::from_raw(
            self.coeffs
                .iter()
                .zip(rhs.coeffs())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &UtpMatrix {
    type Output = UtpMatrix;
    fn neg(self) -> UtpMatrix {
        UtpMatrix::from_raw(self.coeffs.iter().map(|c| -c).collect())
    }
}

//! Independent checks for the lifted factorizations: defining-equation
//! residuals, complex-step and central-difference derivative references,
//! and a 4×4 eigenvalue system with closed-form factors.
//!
//! Everything in this module is deliberately computed *without* the
//! lifted algorithms it is used to test — residuals use plain truncated
//! matrix products, derivative references use complex or real
//! perturbations of ordinary float evaluations, and the test system is
//! built from explicit trigonometric/polynomial coefficient formulas.

use crate::matrix::UtpMatrix;
use crate::scalar::UtpScalar;
use ndarray::Array2;
use num_complex::Complex64;

/// Recommended perturbation for [`csda_scalar`] / [`csda_matrix`]: the
/// complex step commits no subtractive cancellation, so the step can sit
/// far below the square root of machine precision.
pub const DEFAULT_CSDA_EPS: f64 = 1e-20;

/// Recommended step for first-order central differences.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Per-coefficient residuals of the QR defining equations.
#[derive(Debug, Clone)]
pub struct QrResiduals {
    /// `max |(QR - A)_d|` for each coefficient `d`.
    pub product: Vec<f64>,
    /// `max |(QᵀQ - I)_d|`.
    pub orthogonality: Vec<f64>,
    /// `max |R_d[i,j]|` over strictly lower entries `i > j`.
    pub triangularity: Vec<f64>,
}

impl QrResiduals {
    pub fn max(&self) -> f64 {
        self.product
            .iter()
            .chain(&self.orthogonality)
            .chain(&self.triangularity)
            .cloned()
            .fold(0.0, f64::max)
    }
}

/// Measures how well `(q, r)` factor `a`: the three defining equations
/// evaluated with plain truncated products.
pub fn residual_qr(a: &UtpMatrix, q: &UtpMatrix, r: &UtpMatrix) -> QrResiduals {
    let (m, n) = a.dim();
    assert_eq!(q.dim(), (m, m), "Q must be M×M");
    assert_eq!(r.dim(), (m, n), "R must be M×N");
    let product = (&q.matmul(r) - a).coeff_inf_norms();
    let orthogonality = (&q.transpose().matmul(q) - &UtpMatrix::identity(m, a.degree()))
        .coeff_inf_norms();
    let triangularity = (0..r.degree())
        .map(|d| {
            let rd = r.coeff(d);
            let mut worst = 0.0f64;
            for i in 0..m {
                for j in 0..n.min(i) {
                    worst = worst.max(rd[[i, j]].abs());
                }
            }
            worst
        })
        .collect();
    QrResiduals { product, orthogonality, triangularity }
}

/// Per-coefficient residuals of the eigendecomposition defining
/// equations.
#[derive(Debug, Clone)]
pub struct EighResiduals {
    /// `max |(QᵀAQ - Λ)_d|`.
    pub similarity: Vec<f64>,
    /// `max |(QᵀQ - I)_d|`.
    pub orthogonality: Vec<f64>,
    /// `max |Λ_d[i,j]|` over `i ≠ j` — zero only for a fully
    /// diagonalized result; block-diagonal (relaxed) solutions are
    /// expected to fail this component while passing the other two.
    pub diagonality: Vec<f64>,
}

impl EighResiduals {
    pub fn max(&self) -> f64 {
        self.similarity
            .iter()
            .chain(&self.orthogonality)
            .chain(&self.diagonality)
            .cloned()
            .fold(0.0, f64::max)
    }
}

/// Measures how well `(q, lam)` diagonalize symmetric `a`.
pub fn residual_eigh(a: &UtpMatrix, q: &UtpMatrix, lam: &UtpMatrix) -> EighResiduals {
    let n = a.nrows();
    assert_eq!(a.dim(), (n, n), "A must be square");
    assert_eq!(q.dim(), (n, n), "Q must match A");
    assert_eq!(lam.dim(), (n, n), "Λ must match A");
    let similarity = (&q.transpose().matmul(a).matmul(q) - lam).coeff_inf_norms();
    let orthogonality = (&q.transpose().matmul(q) - &UtpMatrix::identity(n, a.degree()))
        .coeff_inf_norms();
    let diagonality = (0..lam.degree())
        .map(|d| {
            let ld = lam.coeff(d);
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        worst = worst.max(ld[[i, j]].abs());
                    }
                }
            }
            worst
        })
        .collect();
    EighResiduals { similarity, orthogonality, diagonality }
}

fn complex_point(x: &[f64], xdot: &[f64], eps: f64) -> Vec<Complex64> {
    assert_eq!(x.len(), xdot.len(), "point and direction must match");
    x.iter()
        .zip(xdot)
        .map(|(&re, &im)| Complex64::new(re, eps * im))
        .collect()
}

/// Complex-step directional derivative of a scalar function:
/// `Im(f(x + iεẋ)) / ε`, exact to rounding for analytic `f`.
pub fn csda_scalar<F>(f: F, x: &[f64], xdot: &[f64], eps: f64) -> f64
where
    F: Fn(&[Complex64]) -> Complex64,
{
    f(&complex_point(x, xdot, eps)).im / eps
}

/// Complex-step directional derivative of a matrix-valued function.
pub fn csda_matrix<F>(f: F, x: &[f64], xdot: &[f64], eps: f64) -> Array2<f64>
where
    F: Fn(&[Complex64]) -> Array2<Complex64>,
{
    f(&complex_point(x, xdot, eps)).mapv(|v| v.im / eps)
}

fn shifted(x: &[f64], xdot: &[f64], h: f64) -> Vec<f64> {
    assert_eq!(x.len(), xdot.len(), "point and direction must match");
    x.iter().zip(xdot).map(|(&a, &b)| a + h * b).collect()
}

/// Central-difference directional derivative of a scalar function.
pub fn fd_scalar<F>(f: F, x: &[f64], xdot: &[f64], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    (f(&shifted(x, xdot, h)) - f(&shifted(x, xdot, -h))) / (2.0 * h)
}

/// Central-difference directional derivative of a matrix function.
pub fn fd_matrix<F>(f: F, x: &[f64], xdot: &[f64], h: f64) -> Array2<f64>
where
    F: Fn(&[f64]) -> Array2<f64>,
{
    (&f(&shifted(x, xdot, h)) - &f(&shifted(x, xdot, -h))) / (2.0 * h)
}

/// Second Taylor coefficient of `t ↦ f(x + tẋ)` by central differences:
/// `(f(x+hẋ) - 2f(x) + f(x-hẋ)) / (2h²)`.  Needs a larger `h` than
/// [`fd_matrix`] to keep rounding noise `∼ε/h²` in check.
pub fn fd_matrix_second<F>(f: F, x: &[f64], xdot: &[f64], h: f64) -> Array2<f64>
where
    F: Fn(&[f64]) -> Array2<f64>,
{
    let plus = f(&shifted(x, xdot, h));
    let minus = f(&shifted(x, xdot, -h));
    let center = f(x);
    (&(&plus + &minus) - &(&center * 2.0)) / (2.0 * h * h)
}

/// A 4×4 symmetric curve `A(t) = Q(t) Λ(t) Q(t)ᵀ` whose factors are
/// known in closed form:
///
/// ```text
/// Q(t) = 3^{-1/2} · [ cos x   1      sin x   -1
///                     -sin x  -1     cos x   -1
///                     1       -sin x 1       cos x
///                     -1      cos x  1       sin x ],   x = 1 + t,
///
/// Λ(t) = diag( x² - x + ½,
///              4x² - 3x,
///              δ(-½x³ + 2x² - 3/2·x + 1) + x³ + x² - 1,
///              3x - 1 ).
/// ```
///
/// At `δ = 0` the second and third eigenvalue curves coincide through
/// degree 2 and split at the cubic coefficient, which makes the system a
/// sharp probe of block splitting across levels; small `δ > 0` sweeps
/// the near-degenerate regime.
#[derive(Debug, Clone)]
pub struct AndrewSystem {
    pub a: UtpMatrix,
    pub lam: UtpMatrix,
    pub q: UtpMatrix,
    pub delta: f64,
}

impl AndrewSystem {
    pub fn new(delta: f64, degree: usize) -> Self {
        assert!(degree >= 1, "degree must be positive");
        let x = if degree == 1 {
            UtpScalar::constant(1.0, 1)
        } else {
            UtpScalar::variable(1.0, degree)
        };
        let one = UtpScalar::one(degree);
        let neg_one = one.scale(-1.0);
        let (s, c) = x.sin_cos();

        let grid = vec![
            vec![c.clone(), one.clone(), s.clone(), neg_one.clone()],
            vec![s.scale(-1.0), neg_one.clone(), c.clone(), neg_one.clone()],
            vec![one.clone(), s.scale(-1.0), one.clone(), c.clone()],
            vec![neg_one.clone(), c.clone(), one.clone(), s.clone()],
        ];
        let q = UtpMatrix::from_scalar_grid(&grid)
            .expect("grid is rectangular")
            .scale(1.0 / 3.0f64.sqrt());
        // Each column holds one cos, one sin and two ±1 entries, so the
        // 3^{-1/2} prefactor makes it exactly unit norm; verify the whole
        // polynomial is orthogonal before using it to assemble A.
        let orth = (&q.transpose().matmul(&q) - &UtpMatrix::identity(4, degree))
            .coeff_inf_norms()
            .into_iter()
            .fold(0.0, f64::max);
        assert!(orth < 1e-13, "factor lost orthogonality: residual {orth}");

        let x2 = x.powi(2);
        let x3 = x.powi(3);
        let l1 = &(&x2 - &x) + &UtpScalar::constant(0.5, degree);
        let l2 = &x2.scale(4.0) - &x.scale(3.0);
        let bump = &(&(&x3.scale(-0.5) + &x2.scale(2.0)) - &x.scale(1.5)) + &one;
        let l3 = &bump.scale(delta) + &(&(&x3 + &x2) - &one);
        let l4 = &x.scale(3.0) - &one;

        let zero = UtpScalar::zero(degree);
        let diag = |entries: [&UtpScalar; 4]| -> Vec<Vec<UtpScalar>> {
            (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| if i == j { entries[i].clone() } else { zero.clone() })
                        .collect()
                })
                .collect()
        };
        let lam = UtpMatrix::from_scalar_grid(&diag([&l1, &l2, &l3, &l4]))
            .expect("grid is rectangular");

        let a = q.matmul(&lam).matmul(&q.transpose()).symmetrize();
        AndrewSystem { a, lam, q, delta }
    }

    /// The four eigenvalue curves in construction order (not sorted).
    pub fn eigenvalues(&self) -> Vec<UtpScalar> {
        (0..4).map(|i| self.lam.entry(i, i)).collect()
    }
}

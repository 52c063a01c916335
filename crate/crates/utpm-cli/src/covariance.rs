//! Covariance-matrix consistency study.
//!
//! A constrained least-squares problem with residual Jacobian
//! `J₁ ∈ ℝ^{4×2}` and constraint Jacobian `J₂ ∈ ℝ^{1×2}` has parameter
//! covariance
//!
//! ```text
//! C = (I 0) · [ J₁ᵀJ₁  J₂ᵀ ]⁻¹ · (I 0)ᵀ            (saddle-point route)
//!             [ J₂     0   ]
//!
//! C = Q₂ᵀ (Q₂ J₁ᵀJ₁ Q₂ᵀ)⁻¹ Q₂                      (nullspace route)
//! ```
//!
//! where the rows of `Q₂` span the nullspace of `J₂` (trailing columns of
//! the square orthogonal factor of `J₂ᵀ`).  Production codes use the
//! second form, so its derivatives must agree with the first.  Both are
//! evaluated here in Taylor arithmetic along the curve `x(T) = x + ẋT`
//! and cross-checked against a complex-step oracle applied to the
//! saddle-point route, which involves no branch decisions and is
//! therefore safe to evaluate over ℂ.

use ndarray::{s, Array2};
use num_complex::Complex64;
use utpm::linalg::{lu_inverse, max_abs};
use utpm::oracles::{csda_matrix, DEFAULT_CSDA_EPS};
use utpm::qr::qr_pushforward;
use utpm::{Result, UtpMatrix, UtpScalar};

use crate::config::fmt_full;

/// Evaluation point and direction for the study: `x = t·(3,1)`,
/// `ẋ = (5,7)`, together with the Jacobian builders.
#[derive(Debug, Clone)]
pub struct CovarianceInstance {
    pub x: [f64; 2],
    pub xdot: [f64; 2],
}

impl CovarianceInstance {
    pub fn at(t: f64) -> Self {
        Self { x: [3.0 * t, t], xdot: [5.0, 7.0] }
    }

    /// Seeds `x₁, x₂` as degree-`degree` polynomials `xᵢ + ẋᵢT`.
    fn seeds(&self, degree: usize) -> (UtpScalar, UtpScalar) {
        let seed = |x: f64, dx: f64| {
            let mut c = vec![0.0; degree];
            c[0] = x;
            if degree > 1 {
                c[1] = dx;
            }
            UtpScalar::new(c).expect("nonempty coefficient list")
        };
        (seed(self.x[0], self.xdot[0]), seed(self.x[1], self.xdot[1]))
    }

    /// `J₁(x)` in Taylor arithmetic, entries built from elementary
    /// functions only.
    pub fn j1_utp(&self, degree: usize) -> UtpMatrix {
        let (x1, x2) = self.seeds(degree);
        let one = UtpScalar::one(degree);
        let grid = vec![
            vec![&x1.sin() * &x2, x2.cos()],
            vec![x1.exp(), &x1 * &x2],
            vec![
                &x1 * &x2.ln().expect("x2 > 0 on the sweep"),
                (&one + &x1.cos().exp()).ln().expect("1 + exp(cos x1) > 0"),
            ],
            vec![&x2 + &x1, &x1 * &(&x2 + &x1.cos())],
        ];
        UtpMatrix::from_scalar_grid(&grid).expect("rectangular grid")
    }

    /// `J₂(x)` in Taylor arithmetic.
    pub fn j2_utp(&self, degree: usize) -> UtpMatrix {
        let (x1, x2) = self.seeds(degree);
        let x1x2 = &x1 * &x2;
        let grid = vec![vec![
            &x1 * &(&x2 + &x1x2.sin().scale(3.0)).ln().expect("argument > 0 on the sweep"),
            &x2 * &(&x1.sin() + &x1x2.cos()).exp(),
        ]];
        UtpMatrix::from_scalar_grid(&grid).expect("rectangular grid")
    }

    /// `J₁` over ℂ for the complex-step oracle; must encode the same
    /// formulas as [`Self::j1_utp`].
    pub fn j1_complex(z: &[Complex64]) -> Array2<Complex64> {
        let (x1, x2) = (z[0], z[1]);
        let one = Complex64::new(1.0, 0.0);
        ndarray::array![
            [x1.sin() * x2, x2.cos()],
            [x1.exp(), x1 * x2],
            [x1 * x2.ln(), (one + x1.cos().exp()).ln()],
            [x2 + x1, x1 * (x2 + x1.cos())],
        ]
    }

    /// `J₂` over ℂ; must encode the same formulas as [`Self::j2_utp`].
    pub fn j2_complex(z: &[Complex64]) -> Array2<Complex64> {
        let (x1, x2) = (z[0], z[1]);
        ndarray::array![[
            x1 * (x2 + (x1 * x2).sin() * 3.0).ln(),
            x2 * ((x1.sin() + (x1 * x2).cos()).exp()),
        ]]
    }
}

/// Inverse of a polynomial matrix with nonsingular leading coefficient:
/// `B₀ = A₀⁻¹` once, then `B_d = -B₀ Σ_{k=1}^{d} A_k B_{d-k}` from
/// matching coefficients in `[A][B] = I`.
pub fn utp_inverse(a: &UtpMatrix) -> Result<UtpMatrix> {
    let (n, nc) = a.dim();
    assert_eq!(n, nc, "utp_inverse needs a square matrix");
    let b0 = lu_inverse(a.coeff(0))?;
    let mut b: Vec<Array2<f64>> = vec![b0.clone()];
    for d in 1..a.degree() {
        let mut s = Array2::<f64>::zeros((n, n));
        for k in 1..=d {
            s = s + a.coeff(k).dot(&b[d - k]);
        }
        b.push(-b0.dot(&s));
    }
    Ok(UtpMatrix::from_coeffs(b).expect("at least the leading coefficient"))
}

/// Saddle-point route: top-left `N_p×N_p` block of the inverse of
/// `[[J₁ᵀJ₁, J₂ᵀ], [J₂, 0]]`, all in Taylor arithmetic.
pub fn cov_direct(j1: &UtpMatrix, j2: &UtpMatrix) -> Result<UtpMatrix> {
    let np = j1.ncols();
    let nr = j2.nrows();
    assert_eq!(j2.ncols(), np, "J1 and J2 must share the parameter dimension");
    let k = np + nr;
    let kkt = UtpMatrix::zeros(k, k, j1.degree())
        .with_submatrix(0..np, 0..np, &j1.transpose().matmul(j1))
        .with_submatrix(0..np, np..k, &j2.transpose())
        .with_submatrix(np..k, 0..np, j2);
    Ok(utp_inverse(&kkt)?.submatrix(0..np, 0..np))
}

/// Saddle-point route over ℂ for the complex-step oracle.
pub fn cov_direct_complex(j1: &Array2<Complex64>, j2: &Array2<Complex64>) -> Array2<Complex64> {
    let np = j1.ncols();
    let nr = j2.nrows();
    let k = np + nr;
    let mut kkt = Array2::<Complex64>::zeros((k, k));
    kkt.slice_mut(s![..np, ..np]).assign(&j1.t().dot(j1));
    kkt.slice_mut(s![..np, np..]).assign(&j2.t());
    kkt.slice_mut(s![np.., ..np]).assign(j2);
    lu_inverse(&kkt).expect("KKT matrix is nonsingular on the sweep").slice(s![..np, ..np]).to_owned()
}

/// Nullspace route: factor `J₂ᵀ = Q (L; 0)`, take the trailing
/// `N_p - N_r` columns of the square `Q` as `Q₂ᵀ`, and form
/// `C = Q₂ᵀ (Q₂ J₁ᵀJ₁ Q₂ᵀ)⁻¹ Q₂` in Taylor arithmetic.
pub fn cov_nullspace(j1: &UtpMatrix, j2: &UtpMatrix) -> Result<UtpMatrix> {
    let np = j1.ncols();
    let nr = j2.nrows();
    let f = qr_pushforward(&j2.transpose())?;
    let q2t = f.q.submatrix(0..np, nr..np);
    let q2 = q2t.transpose();
    let inner = q2.matmul(&j1.transpose().matmul(j1)).matmul(&q2t);
    Ok(q2t.matmul(&utp_inverse(&inner)?).matmul(&q2))
}

/// One sweep point of the study.
#[derive(Debug, Clone)]
pub struct CovRow {
    pub t: f64,
    /// `csda-vs-utp` or `direct-vs-nullspace`.
    pub comparison: &'static str,
    pub max_abs_diff: f64,
}

pub const COV_HEADER: &str = "t,comparison,max_abs_diff";

/// Largest difference the study tolerates before reporting failure.
pub const COV_PASS_TOL: f64 = 1e-10;

/// Runs both comparisons over the sweep.  Rows are ordered by sweep
/// index, with the complex-step comparison first at each point.
pub fn run_covariance(degree: usize, ts: &[f64]) -> Result<Vec<CovRow>> {
    assert!(degree >= 2, "the study needs at least the first-order coefficient");
    let mut rows = Vec::with_capacity(2 * ts.len());
    for &t in ts {
        let inst = CovarianceInstance::at(t);
        let j1 = inst.j1_utp(degree);
        let j2 = inst.j2_utp(degree);
        let direct = cov_direct(&j1, &j2)?;
        let nullspace = cov_nullspace(&j1, &j2)?;

        let csda = csda_matrix(
            |z| cov_direct_complex(&CovarianceInstance::j1_complex(z), &CovarianceInstance::j2_complex(z)),
            &inst.x,
            &inst.xdot,
            DEFAULT_CSDA_EPS,
        );
        let csda_diff = max_abs(&(direct.coeff(1) - &csda));
        let route_diff = direct.max_abs_diff(&nullspace);

        rows.push(CovRow { t, comparison: "csda-vs-utp", max_abs_diff: csda_diff });
        rows.push(CovRow { t, comparison: "direct-vs-nullspace", max_abs_diff: route_diff });
    }
    Ok(rows)
}

pub fn covariance_csv(rows: &[CovRow]) -> String {
    let mut out = String::from(COV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{}\n", fmt_full(r.t), r.comparison, fmt_full(r.max_abs_diff)));
    }
    out
}

/// `(pass, worst)` under [`COV_PASS_TOL`].
pub fn covariance_verdict(rows: &[CovRow]) -> (bool, f64) {
    let worst = rows.iter().map(|r| r.max_abs_diff).fold(0.0, f64::max);
    (worst <= COV_PASS_TOL, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use utpm::oracles::fd_matrix;

    fn trivial_j1(degree: usize) -> UtpMatrix {
        UtpMatrix::identity(2, degree)
    }

    fn row_j2(a: f64, b: f64, degree: usize) -> UtpMatrix {
        UtpMatrix::constant(ndarray::array![[a, b]], degree)
    }

    #[test]
    fn direct_route_solves_trivial_instance() {
        // J1 = I, J2 = (1,0): the constraint pins the first parameter, so
        // the covariance is diag(0, 1); solved by hand from the 3×3
        // saddle-point system.
        let c = cov_direct(&trivial_j1(1), &row_j2(1.0, 0.0, 1)).unwrap();
        assert!(max_abs(&(c.coeff(0) - &ndarray::array![[0.0, 0.0], [0.0, 1.0]])) < 1e-14);
    }

    #[test]
    fn constraint_row_scaling_leaves_covariance_unchanged() {
        let c1 = cov_direct(&trivial_j1(1), &row_j2(1.0, 0.0, 1)).unwrap();
        let c2 = cov_direct(&trivial_j1(1), &row_j2(2.0, 0.0, 1)).unwrap();
        assert!(c1.max_abs_diff(&c2) < 1e-14);
    }

    #[test]
    fn nullspace_route_solves_trivial_instance() {
        let c = cov_nullspace(&trivial_j1(1), &row_j2(1.0, 0.0, 1)).unwrap();
        assert!(max_abs(&(c.coeff(0) - &ndarray::array![[0.0, 0.0], [0.0, 1.0]])) < 1e-14);
    }

    #[test]
    fn axis_aligned_constraint_zeroes_the_pinned_block() {
        // J2 = (0,1) pins the second parameter: C = diag(1, 0).
        for c in [
            cov_direct(&trivial_j1(1), &row_j2(0.0, 1.0, 1)).unwrap(),
            cov_nullspace(&trivial_j1(1), &row_j2(0.0, 1.0, 1)).unwrap(),
        ] {
            assert!(max_abs(&(c.coeff(0) - &ndarray::array![[1.0, 0.0], [0.0, 0.0]])) < 1e-14);
        }
    }

    #[test]
    fn polynomial_inverse_satisfies_its_defining_product() {
        let a = UtpMatrix::from_coeffs(vec![
            ndarray::array![[2.0, 1.0], [0.5, 3.0]],
            ndarray::array![[0.3, -1.0], [0.7, 0.2]],
            ndarray::array![[-0.4, 0.1], [0.9, -0.6]],
        ])
        .unwrap();
        let b = utp_inverse(&a).unwrap();
        assert!(a.matmul(&b).max_abs_diff(&UtpMatrix::identity(2, 3)) < 1e-14);
    }

    #[test]
    fn study_instance_first_order_matches_complex_step() {
        let inst = CovarianceInstance::at(0.5);
        let c = cov_direct(&inst.j1_utp(2), &inst.j2_utp(2)).unwrap();
        let csda = csda_matrix(
            |z| {
                cov_direct_complex(
                    &CovarianceInstance::j1_complex(z),
                    &CovarianceInstance::j2_complex(z),
                )
            },
            &inst.x,
            &inst.xdot,
            DEFAULT_CSDA_EPS,
        );
        assert!(max_abs(&(c.coeff(1) - &csda)) < 1e-12);
    }

    #[test]
    fn complex_step_agrees_with_central_differences() {
        // Independent cross-check of the oracle itself: two unrelated
        // derivative approximations of the same route.
        let inst = CovarianceInstance::at(0.5);
        let real_cov = |v: &[f64]| {
            let z: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            cov_direct_complex(&CovarianceInstance::j1_complex(&z), &CovarianceInstance::j2_complex(&z))
                .mapv(|c| c.re)
        };
        let fd = fd_matrix(real_cov, &inst.x, &inst.xdot, 1e-5);
        let csda = csda_matrix(
            |z| {
                cov_direct_complex(
                    &CovarianceInstance::j1_complex(z),
                    &CovarianceInstance::j2_complex(z),
                )
            },
            &inst.x,
            &inst.xdot,
            DEFAULT_CSDA_EPS,
        );
        assert!(max_abs(&(&fd - &csda)) < 1e-6);
    }

    #[test]
    fn both_taylor_routes_agree_on_the_study_instance() {
        let inst = CovarianceInstance::at(0.5);
        let j1 = inst.j1_utp(2);
        let j2 = inst.j2_utp(2);
        let direct = cov_direct(&j1, &j2).unwrap();
        let nullspace = cov_nullspace(&j1, &j2).unwrap();
        assert!(direct.max_abs_diff(&nullspace) < 1e-12);
    }

    #[test]
    fn constraint_qualification_holds_on_the_sweep() {
        // rank(J2) = 1 and rank(J1; J2) = 2 at the endpoints and midpoint.
        for t in [0.1, 0.5, 1.0] {
            let inst = CovarianceInstance::at(t);
            let j2 = inst.j2_utp(2);
            assert!(max_abs(j2.coeff(0)) > 1e-3);
            let j1 = inst.j1_utp(2);
            let gram = j1.coeff(0).t().dot(j1.coeff(0));
            let det = gram[[0, 0]] * gram[[1, 1]] - gram[[0, 1]] * gram[[1, 0]];
            assert!(det.abs() > 1e-6);
        }
    }
}

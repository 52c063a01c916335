//! Property-based checks: scalar ring axioms, elementary-function
//! identities, and the matrix-identity toolbox the factorization
//! algorithms lean on (projector algebra, triangular products, the
//! masked-trace pairing identity).

use ndarray::Array2;
use proptest::prelude::*;
use utpm::linalg::{max_abs, upper_tri_inverse};
use utpm::oracles::csda_scalar;
use utpm::{SkeletalProjector, UtpMatrix, UtpScalar};

fn utp(deg: usize) -> impl Strategy<Value = UtpScalar> {
    prop::collection::vec(-2.0..2.0f64, deg).prop_map(|c| UtpScalar::new(c).unwrap())
}

/// UTP whose leading coefficient is bounded away from zero (positive).
fn utp_pos(deg: usize) -> impl Strategy<Value = UtpScalar> {
    (0.5..2.0f64, prop::collection::vec(-2.0..2.0f64, deg - 1)).prop_map(|(lead, rest)| {
        let mut c = vec![lead];
        c.extend(rest);
        UtpScalar::new(c).unwrap()
    })
}

fn utp_triple() -> impl Strategy<Value = (UtpScalar, UtpScalar, UtpScalar)> {
    (1usize..=6).prop_flat_map(|d| (utp(d), utp(d), utp(d)))
}

fn mat(m: usize, n: usize) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(-2.0..2.0f64, m * n)
        .prop_map(move |v| Array2::from_shape_vec((m, n), v).unwrap())
}

/// Lower-triangular with diagonal bounded away from zero.
fn lower_tri(n: usize) -> impl Strategy<Value = Array2<f64>> {
    mat(n, n).prop_map(|mut a| {
        let n = a.nrows();
        for i in 0..n {
            for j in i + 1..n {
                a[[i, j]] = 0.0;
            }
            a[[i, i]] = a[[i, i]].signum() * (a[[i, i]].abs() + 0.5);
        }
        a
    })
}

fn strictly_lower(n: usize) -> impl Strategy<Value = Array2<f64>> {
    mat(n, n).prop_map(|mut a| {
        let n = a.nrows();
        for i in 0..n {
            for j in i..n {
                a[[i, j]] = 0.0;
            }
        }
        a
    })
}

fn scalars_close(a: &UtpScalar, b: &UtpScalar, tol: f64) -> bool {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0))
}

fn mats_close(a: &Array2<f64>, b: &Array2<f64>, tol: f64) -> bool {
    max_abs(&(a - b)) <= tol * max_abs(a).max(max_abs(b)).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // --- scalar ring axioms -------------------------------------------------

    #[test]
    fn add_is_associative_and_commutative((a, b, c) in utp_triple()) {
        prop_assert!(scalars_close(&(&(&a + &b) + &c), &(&a + &(&b + &c)), 1e-13));
        prop_assert!(scalars_close(&(&a + &b), &(&b + &a), 0.0));
    }

    #[test]
    fn mul_is_associative_and_commutative((a, b, c) in utp_triple()) {
        prop_assert!(scalars_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-13));
        prop_assert!(scalars_close(&(&a * &b), &(&b * &a), 1e-13));
    }

    #[test]
    fn mul_distributes_over_add((a, b, c) in utp_triple()) {
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        prop_assert!(scalars_close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn one_is_multiplicative_identity(a in (1usize..=6).prop_flat_map(utp)) {
        let one = UtpScalar::one(a.degree());
        let via_one = &one * &a;
        prop_assert_eq!(via_one.coeffs(), a.coeffs());
        let zero = UtpScalar::zero(a.degree());
        let via_zero = &a + &zero;
        prop_assert_eq!(via_zero.coeffs(), a.coeffs());
        prop_assert!((&a - &a).coeffs().iter().all(|&v| v == 0.0));
    }

    // --- elementary-function identities -------------------------------------

    #[test]
    fn exp_log_compose_to_identity(a in (1usize..=6).prop_flat_map(utp_pos)) {
        let roundtrip = a.ln().unwrap().exp();
        prop_assert!(scalars_close(&roundtrip, &a, 1e-12));
    }

    #[test]
    fn sqrt_squares_back(a in (1usize..=6).prop_flat_map(utp_pos)) {
        let s = a.sqrt().unwrap();
        prop_assert!(scalars_close(&(&s * &s), &a, 1e-12));
    }

    #[test]
    fn division_round_trips(
        a in (2usize..=6).prop_flat_map(utp),
        b in (2usize..=6).prop_flat_map(utp_pos),
    ) {
        // Align degrees by windowing the longer one.
        let d = a.degree().min(b.degree());
        let (a, b) = (a.window(0, d), b.window(0, d));
        let q = a.div(&b).unwrap();
        prop_assert!(scalars_close(&(&q * &b), &a, 1e-11));
    }

    #[test]
    fn sin_cos_pythagoras(a in (1usize..=6).prop_flat_map(utp)) {
        let (s, c) = a.sin_cos();
        let sum = &(&s * &s) + &(&c * &c);
        prop_assert!(scalars_close(&sum, &UtpScalar::one(a.degree()), 1e-13));
    }

    #[test]
    fn sine_coefficients_satisfy_derivative_recurrence(a in (2usize..=7).prop_flat_map(utp)) {
        // sin([a])' = [a]'·cos([a]) at coefficient level:
        // (d+1)·s_{d+1} = Σ_{k=0}^{d} (k+1)·a_{k+1}·c_{d−k}.
        let (s, c) = a.sin_cos();
        for d in 0..a.degree() - 1 {
            let lhs = (d + 1) as f64 * s.coeff(d + 1);
            let rhs: f64 = (0..=d)
                .map(|k| (k + 1) as f64 * a.coeff(k + 1) * c.coeff(d - k))
                .sum();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(rhs.abs()).max(1.0));
        }
    }

    #[test]
    fn csda_is_exact_on_quadratics(
        p in prop::array::uniform3(-2.0..2.0f64),
        x in -2.0..2.0f64,
        v in -2.0..2.0f64,
    ) {
        // For p(x) = αx² + βx + γ the complex step has no truncation error
        // at all, so even a large step (1e-10) reproduces (2αx + β)v.
        let [alpha, beta, gamma] = p;
        let got = csda_scalar(
            |z| {
                let x = z[0];
                x * x * alpha + x * beta + gamma
            },
            &[x],
            &[v],
            1e-10,
        );
        let expected = (2.0 * alpha * x + beta) * v;
        prop_assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // --- matrix identity toolbox --------------------------------------------

    #[test]
    fn antisymmetric_splits_through_lower_mask(g in (2usize..=6).prop_flat_map(|n| mat(n, n))) {
        // X antisymmetric ⇒ X = P_L∘X − (P_L∘X)ᵀ, exactly.
        let x = &g - &g.t();
        let n = x.nrows();
        let pl = SkeletalProjector::lower_strict(n, n);
        let lower = pl.apply(&x);
        prop_assert_eq!(max_abs(&(&x - &(&lower - &lower.t()))), 0.0);
    }

    #[test]
    fn lower_mask_transposes_to_upper_mask(a in (2usize..=6).prop_flat_map(|n| mat(n, n))) {
        let n = a.nrows();
        let lhs = SkeletalProjector::lower_strict(n, n).apply(&a).t().to_owned();
        let rhs = SkeletalProjector::upper_strict(n, n).apply(&a.t().to_owned());
        prop_assert_eq!(max_abs(&(&lhs - &rhs)), 0.0);
    }

    #[test]
    fn masked_trace_pairing_swaps_arguments(
        (a, b, c) in (2usize..=6).prop_flat_map(|n| (mat(n, n), mat(n, n), mat(n, n))),
    ) {
        // tr(Aᵀ(B∘C)) = tr(Cᵀ(B∘A)).
        let lhs: f64 = (&a * &(&b * &c)).sum();
        let rhs: f64 = (&c * &(&b * &a)).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(rhs.abs()).max(1.0));
    }

    #[test]
    fn diagonal_of_lower_product_factors(
        (a, b) in (2usize..=6).prop_flat_map(|n| (lower_tri(n), lower_tri(n))),
    ) {
        let n = a.nrows();
        let pd = SkeletalProjector::diagonal(n, n);
        let lhs = pd.apply(&a.dot(&b));
        let rhs = pd.apply(&a).dot(&pd.apply(&b));
        prop_assert!(mats_close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn diagonal_mask_ignores_transpose(a in (2usize..=6).prop_flat_map(|n| mat(n, n))) {
        let n = a.nrows();
        let pd = SkeletalProjector::diagonal(n, n);
        prop_assert_eq!(max_abs(&(&pd.apply(&a.t().to_owned()) - &pd.apply(&a))), 0.0);
    }

    #[test]
    fn diagonal_of_triangular_inverse_inverts_diagonal(l in (2usize..=6).prop_flat_map(lower_tri)) {
        // P_D∘(A⁻¹) = (P_D∘A)⁻¹ for nonsingular lower-triangular A.
        let n = l.nrows();
        let inv = upper_tri_inverse(&l.t().to_owned()).unwrap().t().to_owned();
        let pd = SkeletalProjector::diagonal(n, n);
        let lhs = pd.apply(&inv);
        let rhs = Array2::from_diag(&l.diag().mapv(|v| 1.0 / v));
        prop_assert!(mats_close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn strictly_lower_times_lower_stays_strictly_lower(
        (s, l) in (2usize..=6).prop_flat_map(|n| (strictly_lower(n), lower_tri(n))),
    ) {
        let n = s.nrows();
        let p = s.dot(&l);
        for i in 0..n {
            for j in i..n {
                prop_assert_eq!(p[[i, j]], 0.0);
            }
        }
        // Corollary: a diagonal right factor preserves strict lowerness too.
        let d = Array2::from_diag(&l.diag());
        let pd = s.dot(&d);
        for i in 0..n {
            for j in i..n {
                prop_assert_eq!(pd[[i, j]], 0.0);
            }
        }
    }

    #[test]
    fn symmetric_antisymmetric_parts_sum_back(a in (2usize..=6).prop_flat_map(|n| mat(n, n))) {
        let s = (&a + &a.t()) * 0.5;
        let x = (&a - &a.t()) * 0.5;
        prop_assert!(mats_close(&(&s + &x), &a, 1e-13));
        prop_assert_eq!(max_abs(&(&s - &s.t())), 0.0);
        prop_assert_eq!(max_abs(&(&x + &x.t())), 0.0);
    }

    // --- truncated matrix polynomial algebra --------------------------------

    #[test]
    fn matmul_is_associative(
        (a, b, c) in (1usize..=4, 2usize..=4, 2usize..=4, 2usize..=4, 2usize..=4).prop_flat_map(
            |(deg, m, k, l, n)| {
                let grid = move |r: usize, c: usize| {
                    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, r * c), deg)
                        .prop_map(move |cs| {
                            UtpMatrix::from_coeffs(
                                cs.into_iter()
                                    .map(|v| Array2::from_shape_vec((r, c), v).unwrap())
                                    .collect(),
                            )
                            .unwrap()
                        })
                };
                (grid(m, k), grid(k, l), grid(l, n))
            },
        ),
    ) {
        let lhs = a.matmul(&b).matmul(&c);
        let rhs = a.matmul(&b.matmul(&c));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn masked_trace_pairing_holds_per_coefficient(
        (a, b, c) in (1usize..=4, 2usize..=4).prop_flat_map(|(deg, n)| {
            let grid = move || {
                prop::collection::vec(prop::collection::vec(-2.0..2.0f64, n * n), deg)
                    .prop_map(move |cs| {
                        UtpMatrix::from_coeffs(
                            cs.into_iter()
                                .map(|v| Array2::from_shape_vec((n, n), v).unwrap())
                                .collect(),
                        )
                        .unwrap()
                    })
            };
            (grid(), grid(), grid())
        }),
    ) {
        // The pairing identity lifts to polynomials coefficientwise:
        // tr([A]ᵀ([B]∘[C])) ≐ tr([C]ᵀ([B]∘[A])).
        let lhs = a.trace_pair(&b.hadamard_mul(&c));
        let rhs = c.trace_pair(&b.hadamard_mul(&a));
        prop_assert!(scalars_close(&lhs, &rhs, 1e-12));
    }
}

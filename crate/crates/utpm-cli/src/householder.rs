//! Why the QR factorization is lifted through its defining equations.
//!
//! The classical Householder-vector routine branches on `σ = x₂:ᵀx₂:`
//! being zero.  Transcribed into Taylor arithmetic, that branch sees only
//! the zeroth coefficient, so the input `[x] = e₁ + e₂T` — whose tail is
//! zero *now* but not to first order — takes the `β = 0` shortcut and
//! returns an untriangularized higher coefficient.  The lifted
//! factorization never branches on truncated data and keeps `P_L∘R = 0`
//! exactly.  This module runs that contrast and two sanity cases where
//! both routes must agree.

use ndarray::array;
use utpm::matrix::SkeletalProjector;
use utpm::qr::{householder_qr_taylor, householder_vector, qr_pushforward};
use utpm::{UtpMatrix, UtpScalar};

/// Outcome of the demonstration, with a human-readable report.
#[derive(Debug, Clone)]
pub struct HouseholderDemo {
    pub report: String,
    pub pass: bool,
}

/// The pathological input `[x] = e₁ + e₂T` as a 2×1 polynomial matrix.
fn pathological_input() -> UtpMatrix {
    UtpMatrix::from_coeffs(vec![array![[1.0], [0.0]], array![[0.0], [1.0]]]).unwrap()
}

pub fn run_householder_demo() -> HouseholderDemo {
    let mut report = String::new();
    let mut pass = true;
    let check = |report: &mut String, pass: &mut bool, ok: bool, line: String| {
        report.push_str(if ok { "PASS " } else { "FAIL " });
        report.push_str(&line);
        report.push('\n');
        *pass &= ok;
    };

    // 1. The transcription silently drops derivative information.
    let x = vec![
        UtpScalar::new(vec![1.0, 0.0]).unwrap(),
        UtpScalar::new(vec![0.0, 1.0]).unwrap(),
    ];
    let (_, beta) = householder_vector(&x);
    check(
        &mut report,
        &mut pass,
        beta.coeffs().iter().all(|&c| c == 0.0),
        format!("transcribed reflector on e1 + e2*T takes the beta = 0 shortcut (beta = {:?})", beta.coeffs()),
    );

    let a = pathological_input();
    let (_, r_naive) = householder_qr_taylor(&a);
    let naive_defect = r_naive
        .hadamard(&SkeletalProjector::lower_strict(2, 1))
        .coeff(1)
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    check(
        &mut report,
        &mut pass,
        naive_defect > 0.5,
        format!("transcribed R has a below-diagonal first coefficient of {naive_defect} (not upper triangular)"),
    );

    let f = qr_pushforward(&a).expect("full-rank leading coefficient");
    let lifted_defect = f
        .r
        .hadamard(&SkeletalProjector::lower_strict(2, 1))
        .max_abs();
    check(
        &mut report,
        &mut pass,
        lifted_defect == 0.0,
        format!("lifted R stays upper triangular exactly (defect = {lifted_defect})"),
    );

    // 2. On a generic full-rank square input the two routes coincide.
    let generic = UtpMatrix::from_coeffs(vec![
        array![[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]],
        array![[0.5, -1.0, 0.25], [0.75, 0.2, -0.3], [-0.4, 0.6, 0.1]],
        array![[-0.2, 0.3, 0.7], [0.1, -0.5, 0.4], [0.8, 0.0, -0.6]],
    ])
    .unwrap();
    let (q_naive, r_naive) = householder_qr_taylor(&generic);
    let f = qr_pushforward(&generic).expect("full-rank leading coefficient");
    let agreement = q_naive.max_abs_diff(&f.q).max(r_naive.max_abs_diff(&f.r));
    check(
        &mut report,
        &mut pass,
        agreement < 1e-10,
        format!("generic full-rank input: routes agree to {agreement:.3e}"),
    );

    // 3. A constant input must produce constant factors in both routes.
    let constant = UtpMatrix::constant(array![[2.0, 1.0], [1.0, 3.0], [0.5, -1.0]], 3);
    let (q_naive, r_naive) = householder_qr_taylor(&constant);
    let f = qr_pushforward(&constant).expect("full-rank leading coefficient");
    let tail = |m: &UtpMatrix| m.window(1, 3).max_abs();
    let worst_tail = tail(&q_naive).max(tail(&r_naive)).max(tail(&f.q)).max(tail(&f.r));
    check(
        &mut report,
        &mut pass,
        worst_tail == 0.0,
        format!("constant input: higher coefficients vanish in both routes (max = {worst_tail})"),
    );

    HouseholderDemo { report, pass }
}

//! Dense real kernels for the degree-0 (classical) factorizations, plus a
//! small LU that also works for complex matrices.
//!
//! Everything in this crate targets desk-scale problems (dimensions in the
//! single digits), so the implementations favour clarity and reproducible
//! conventions over blocked performance:
//!
//! * [`householder_qr`] — full QR, `Q` square `M×M`, `R` `M×N` with zero
//!   rows below the top square block, and the sign convention
//!   `diag(R) >= 0` enforced by flipping reflector signs afterwards.
//! * [`jacobi_eigh`] — cyclic Jacobi for symmetric matrices; eigenvalues
//!   sorted ascending, each eigenvector's largest-magnitude entry made
//!   positive so the decomposition is a deterministic function of the input.
//! * [`lu_solve`] / [`lu_inverse`] — partial-pivot LU, generic over real
//!   and complex scalars.
//! * [`upper_tri_inverse`] — back substitution.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2, s};
use num_complex::ComplexFloat;

/// Matrix ∞-norm: maximum absolute row sum.
pub fn inf_norm(a: &Array2<f64>) -> f64 {
    a.rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Full Householder QR of an `M×N` matrix with `M >= N`: returns square
/// `Q` (`M×M`) and `R` (`M×N`, upper triangular with exactly zero entries
/// below the diagonal), with `A = Q·R`, `QᵀQ = I`, and `diag(R) >= 0`.
pub fn householder_qr(a: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let (m, n) = a.dim();
    assert!(m >= n, "householder_qr requires M >= N, got {m}×{n}");
    let mut r = a.clone();
    let mut q = Array2::<f64>::eye(m);
    let mut v = vec![0.0; m];

    for j in 0..n {
        // Reflector that maps r[j.., j] onto ±‖·‖ e₁.
        let norm_x: f64 = r.slice(s![j.., j]).iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue; // column already zero below and at the diagonal
        }
        let x0 = r[[j, j]];
        let alpha = if x0 >= 0.0 { -norm_x } else { norm_x };
        for i in j..m {
            v[i] = r[[i, j]];
        }
        v[j] -= alpha;
        let vtv: f64 = v[j..m].iter().map(|x| x * x).sum();
        if vtv > 0.0 {
            let beta = 2.0 / vtv;
            // R[j.., j..] ← (I - β v vᵀ) R[j.., j..]
            for c in j..n {
                let w: f64 = (j..m).map(|i| v[i] * r[[i, c]]).sum();
                for i in j..m {
                    r[[i, c]] -= beta * w * v[i];
                }
            }
            // Q ← Q (I - β v vᵀ)   (accumulate from the right)
            for row in 0..m {
                let w: f64 = (j..m).map(|i| q[[row, i]] * v[i]).sum();
                for i in j..m {
                    q[[row, i]] -= beta * w * v[i];
                }
            }
        }
        // The eliminated entries are zero by construction; store them so.
        for i in j + 1..m {
            r[[i, j]] = 0.0;
        }
    }

    // Sign convention: make the diagonal of R non-negative.
    for j in 0..n {
        if r[[j, j]] < 0.0 {
            for c in j..n {
                r[[j, c]] = -r[[j, c]];
            }
            for i in 0..m {
                q[[i, j]] = -q[[i, j]];
            }
        }
    }
    (q, r)
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix: `A = Q Λ Qᵀ`
/// with eigenvalues ascending and each eigenvector sign-canonicalized
/// (largest-magnitude entry positive; first such entry on ties).
pub fn jacobi_eigh(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "jacobi_eigh requires a square matrix");
    let mut m = a.clone();
    let mut v = Array2::<f64>::eye(n);
    let scale = max_abs(&m).max(1.0);

    let mut converged = n <= 1;
    for _sweep in 0..60 {
        if converged {
            break;
        }
        let off: f64 = {
            let mut s = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    s += m[[i, j]] * m[[i, j]];
                }
            }
            s.sqrt()
        };
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[[p, q]];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                // Classical rotation annihilating m[p,q].
                let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        // One final check; quadratic convergence makes this unreachable for
        // finite symmetric input at the sizes we target.
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m[[i, j]] * m[[i, j]];
            }
        }
        if off.sqrt() > 1e-12 * scale {
            return Err(Error::NoConvergence);
        }
    }

    // Sort ascending, permute eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[i, i]].partial_cmp(&m[[j, j]]).unwrap());
    let lam = Array1::from_iter(order.iter().map(|&i| m[[i, i]]));
    let mut q = Array2::<f64>::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            q[[k, new]] = v[[k, old]];
        }
    }

    // Sign canonicalization column by column.
    for j in 0..n {
        let mut best = 0usize;
        for i in 1..n {
            if q[[i, j]].abs() > q[[best, j]].abs() {
                best = i;
            }
        }
        if q[[best, j]] < 0.0 {
            for i in 0..n {
                q[[i, j]] = -q[[i, j]];
            }
        }
    }
    Ok((lam, q))
}

/// Inverse of an upper-triangular square matrix by back substitution.
/// Diagonal entries below `1e-12 · max(1, ‖R‖∞)` are treated as singular.
pub fn upper_tri_inverse(r: &Array2<f64>) -> Result<Array2<f64>> {
    let n = r.nrows();
    assert_eq!(n, r.ncols(), "upper_tri_inverse requires a square matrix");
    let threshold = 1e-12 * inf_norm(r).max(1.0);
    for i in 0..n {
        if r[[i, i]].abs() < threshold {
            return Err(Error::SingularLeadingCoefficient {
                pivot: r[[i, i]].abs(),
                threshold,
            });
        }
    }
    let mut b = Array2::<f64>::zeros((n, n));
    for col in (0..n).rev() {
        b[[col, col]] = 1.0 / r[[col, col]];
        for row in (0..col).rev() {
            let mut s = 0.0;
            for k in row + 1..=col {
                s += r[[row, k]] * b[[k, col]];
            }
            b[[row, col]] = -s / r[[row, row]];
        }
    }
    Ok(b)
}

/// Partial-pivot LU factorization; returns the packed factors and the
/// row permutation.  Generic so the same code serves the real experiment
/// matrices and the complex-step oracle.
fn lu_factor<T>(a: &Array2<T>) -> Result<(Array2<T>, Vec<usize>)>
where
    T: ComplexFloat<Real = f64> + 'static,
{
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "lu_factor requires a square matrix");
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);

    for k in 0..n {
        let mut pivot = k;
        for i in k + 1..n {
            if lu[[i, k]].abs() > lu[[pivot, k]].abs() {
                pivot = i;
            }
        }
        if lu[[pivot, k]].abs() < 1e-14 * scale {
            return Err(Error::Singular);
        }
        if pivot != k {
            perm.swap(k, pivot);
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[pivot, j]];
                lu[[pivot, j]] = tmp;
            }
        }
        let inv_pivot = T::one() / lu[[k, k]];
        for i in k + 1..n {
            let factor = lu[[i, k]] * inv_pivot;
            lu[[i, k]] = factor;
            for j in k + 1..n {
                let sub = factor * lu[[k, j]];
                lu[[i, j]] = lu[[i, j]] - sub;
            }
        }
    }
    Ok((lu, perm))
}

/// Solves `A X = B` for square `A` via LU with partial pivoting.
pub fn lu_solve<T>(a: &Array2<T>, b: &Array2<T>) -> Result<Array2<T>>
where
    T: ComplexFloat<Real = f64> + 'static,
{
    let (lu, perm) = lu_factor(a)?;
    let n = a.nrows();
    assert_eq!(b.nrows(), n, "right-hand side has wrong row count");
    let rhs = b.ncols();
    let mut x = Array2::<T>::zeros((n, rhs));
    for c in 0..rhs {
        // Forward substitution on the permuted right-hand side.
        for i in 0..n {
            let mut s = b[[perm[i], c]];
            for j in 0..i {
                s = s - lu[[i, j]] * x[[j, c]];
            }
            x[[i, c]] = s;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut s = x[[i, c]];
            for j in i + 1..n {
                s = s - lu[[i, j]] * x[[j, c]];
            }
            x[[i, c]] = s / lu[[i, i]];
        }
    }
    Ok(x)
}

/// Dense inverse via [`lu_solve`] against the identity.
pub fn lu_inverse<T>(a: &Array2<T>) -> Result<Array2<T>>
where
    T: ComplexFloat<Real = f64> + 'static,
{
    let n = a.nrows();
    let mut eye = Array2::<T>::zeros((n, n));
    for i in 0..n {
        eye[[i, i]] = T::one();
    }
    lu_solve(a, &eye)
}

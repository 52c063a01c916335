//! Truncated univariate Taylor polynomial (UTP) scalars.
//!
//! A [`UtpScalar`] of degree `D` stores the coefficients `[y_0, …, y_{D-1}]`
//! of a polynomial in the formal variable `T`, understood modulo `T^D`.
//! Coefficients use the Taylor convention: propagating `x(T) = x_0 + T`
//! through a smooth `f` yields `y_d = f^{(d)}(x_0) / d!`, i.e. higher-order
//! directional derivatives are `d! * y_d`.
//!
//! Arithmetic is exact truncated polynomial arithmetic: multiplication is
//! the Cauchy product cut off at degree `D`, and the elementary functions
//! use the classical recurrences obtained by differentiating their defining
//! ODEs once and convolving.
//!
//! Degrees are fixed per value.  Mixing two different degrees in one
//! operation is a programming error and panics; there is no implicit
//! truncation or zero-padding.  Use [`UtpScalar::window`] to change degree
//! explicitly.

use crate::error::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// Scalar truncated Taylor polynomial with `degree() >= 1` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct UtpScalar {
    coeffs: Vec<f64>,
}

impl UtpScalar {
    /// Wraps a coefficient vector `[y_0, …, y_{D-1}]`.
    ///
    /// Fails if the vector is empty or contains non-finite entries.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::NonFinite);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coeffs })
    }

    /// Internal constructor for values produced by arithmetic.
    pub(crate) fn from_raw(coeffs: Vec<f64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    /// The constant polynomial `x`.
    pub fn constant(x: f64, degree: usize) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        let mut coeffs = vec![0.0; degree];
        coeffs[0] = x;
        Self { coeffs }
    }

    /// The polynomial `x + T`, the seed for differentiating with respect
    /// to `x` itself.  Requires `degree >= 2` to hold the linear term.
    pub fn variable(x: f64, degree: usize) -> Self {
        assert!(degree >= 2, "variable seed needs degree >= 2");
        let mut coeffs = vec![0.0; degree];
        coeffs[0] = x;
        coeffs[1] = 1.0;
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self::constant(0.0, degree)
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(1.0, degree)
    }

    /// Number of stored coefficients `D`.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> f64 {
        self.coeffs[d]
    }

    /// Coefficients `[lo, hi)` as a new polynomial of degree `hi - lo`.
    /// This is the explicit degree-change operation; panics unless
    /// `lo < hi <= degree()`.
    pub fn window(&self, lo: usize, hi: usize) -> Self {
        assert!(lo < hi && hi <= self.degree(), "window out of range");
        Self::from_raw(self.coeffs[lo..hi].to_vec())
    }

    /// Evaluates the polynomial at a real `t` (Horner).  Useful for
    /// cross-checking against pointwise recomputation; not part of the
    /// truncated-arithmetic ring itself.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_raw(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn check_degree(&self, other: &Self) {
        assert_eq!(
            self.degree(),
            other.degree(),
            "degree mismatch: {} vs {}",
            self.degree(),
            other.degree()
        );
    }

    /// Truncated division `self / rhs`; fails if `rhs` has zero leading
    /// coefficient (the quotient then has a pole at `T = 0`).
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_degree(rhs);
        let b0 = rhs.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let d = self.degree();
        let mut c = vec![0.0; d];
        // c[k] = (a[k] - Σ_{j=1}^{k} b[j]·c[k-j]) / b[0]
        for k in 0..d {
            let mut s = self.coeffs[k];
            for j in 1..=k {
                s -= rhs.coeffs[j] * c[k - j];
            }
            c[k] = s / b0;
        }
        Ok(Self::from_raw(c))
    }

    /// Multiplicative inverse `1 / self`.
    pub fn recip(&self) -> Result<Self> {
        Self::one(self.degree()).div(self)
    }

    /// Integer power by repeated squaring in the truncated ring.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(self.degree());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Exponential.  With `y = exp(a)`, differentiating `y' = a'·y` gives
    /// `y[k] = (1/k) Σ_{j=1}^{k} j·a[j]·y[k-j]`.
    pub fn exp(&self) -> Self {
        let d = self.degree();
        let mut y = vec![0.0; d];
        y[0] = self.coeffs[0].exp();
        for k in 1..d {
            let mut s = 0.0;
            for j in 1..=k {
                s += (j as f64) * self.coeffs[j] * y[k - j];
            }
            y[k] = s / k as f64;
        }
        Self::from_raw(y)
    }

    /// Natural logarithm; requires a positive leading coefficient.
    /// From `a' = a·y'`: `y[k] = (a[k] - (1/k) Σ_{j=1}^{k-1} j·y[j]·a[k-j]) / a[0]`.
    pub fn ln(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(Error::DomainViolation { func: "ln", value: a0 });
        }
        let d = self.degree();
        let mut y = vec![0.0; d];
        y[0] = a0.ln();
        for k in 1..d {
            let mut s = 0.0;
            for j in 1..k {
                s += (j as f64) * y[j] * self.coeffs[k - j];
            }
            y[k] = (self.coeffs[k] - s / k as f64) / a0;
        }
        Ok(Self::from_raw(y))
    }

    /// Square root; requires a positive leading coefficient.
    /// From `y·y = a`: `y[k] = (a[k] - Σ_{j=1}^{k-1} y[j]·y[k-j]) / (2·y[0])`.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(Error::DomainViolation { func: "sqrt", value: a0 });
        }
        let d = self.degree();
        let mut y = vec![0.0; d];
        y[0] = a0.sqrt();
        for k in 1..d {
            let mut s = 0.0;
            for j in 1..k {
                s += y[j] * y[k - j];
            }
            y[k] = (self.coeffs[k] - s) / (2.0 * y[0]);
        }
        Ok(Self::from_raw(y))
    }

    /// Sine and cosine together; they share one coupled recurrence:
    /// `s[k] =  (1/k) Σ_{j=1}^{k} j·a[j]·c[k-j]`,
    /// `c[k] = -(1/k) Σ_{j=1}^{k} j·a[j]·s[k-j]`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let d = self.degree();
        let mut s = vec![0.0; d];
        let mut c = vec![0.0; d];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..d {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let ja = (j as f64) * self.coeffs[j];
                ds += ja * c[k - j];
                dc += ja * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = -dc / k as f64;
        }
        (Self::from_raw(s), Self::from_raw(c))
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }
}

impl Add for &UtpScalar {
    type Output = UtpScalar;
    fn add(self, rhs: &UtpScalar) -> UtpScalar {
        self.check_degree(rhs);
        UtpScalar::from_raw(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &UtpScalar {
    type Output = UtpScalar;
    fn sub(self, rhs: &UtpScalar) -> UtpScalar {
        self.check_degree(rhs);
        UtpScalar::from_raw(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Mul for &UtpScalar {
    type Output = UtpScalar;
    /// Truncated Cauchy product: `c[k] = Σ_{j=0}^{k} a[j]·b[k-j]`.
    fn mul(self, rhs: &UtpScalar) -> UtpScalar {
        self.check_degree(rhs);
        let d = self.degree();
        let mut c = vec![0.0; d];
        for j in 0..d {
            let aj = self.coeffs[j];
            if aj == 0.0 {
                continue;
            }
            for k in j..d {
                c[k] += aj * rhs.coeffs[k - j];
            }
        }
        UtpScalar::from_raw(c)
    }
}

impl Neg for &UtpScalar {
    type Output = UtpScalar;
    fn neg(self) -> UtpScalar {
        UtpScalar::from_raw(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_coeffs_eq(y: &UtpScalar, want: &[f64], tol: f64) {
        assert_eq!(y.degree(), want.len());
        for (a, b) in y.coeffs().iter().zip(want) {
            assert!((a - b).abs() <= tol, "{:?} vs {:?}", y.coeffs(), want);
        }
    }

    #[test]
    fn add_componentwise() {
        let a = UtpScalar::new(vec![1.0, 2.0]).unwrap();
        let b = UtpScalar::new(vec![3.0, 4.0]).unwrap();
        assert_coeffs_eq(&(&a + &b), &[4.0, 6.0], 0.0);
        assert_coeffs_eq(&(&a - &b), &[-2.0, -2.0], 0.0);
    }

    #[test]
    fn mul_against_untruncated_product() {
        // Oracle: multiply as full polynomials, then cut at D.
        let a = UtpScalar::new(vec![0.3, -1.2, 0.7, 2.0]).unwrap();
        let b = UtpScalar::new(vec![-0.5, 0.25, 1.5, -0.75]).unwrap();
        let d = a.degree();
        let mut full = vec![0.0; 2 * d - 1];
        for i in 0..d {
            for j in 0..d {
                full[i + j] += a.coeff(i) * b.coeff(j);
            }
        }
        assert_coeffs_eq(&(&a * &b), &full[..d], 1e-15);
    }

    #[test]
    fn mul_square_of_one_plus_t() {
        let a = UtpScalar::new(vec![1.0, 1.0]).unwrap();
        assert_coeffs_eq(&(&a * &a), &[1.0, 2.0], 0.0);
    }

    #[test]
    fn div_round_trip() {
        let a = UtpScalar::new(vec![0.9, -0.4, 1.3, 0.2, -2.0]).unwrap();
        let b = UtpScalar::new(vec![2.0, 0.7, -0.3, 1.1, 0.5]).unwrap();
        let q = a.div(&b).unwrap();
        assert_coeffs_eq(&(&q * &b), a.coeffs(), 1e-14);
    }

    #[test]
    fn div_zero_leading_coefficient_fails() {
        let a = UtpScalar::one(3);
        let b = UtpScalar::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(a.div(&b), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn exp_of_t() {
        // exp(0 + T) = 1 + T + T²/2 + T³/6 + …
        let x = UtpScalar::variable(0.0, 5);
        assert_coeffs_eq(&x.exp(), &[1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0], 1e-15);
    }

    #[test]
    fn ln_domain_error() {
        assert!(matches!(
            UtpScalar::constant(-1.0, 3).ln(),
            Err(Error::DomainViolation { func: "ln", .. })
        ));
        assert!(matches!(
            UtpScalar::constant(0.0, 3).sqrt(),
            Err(Error::DomainViolation { func: "sqrt", .. })
        ));
    }

    #[test]
    fn sqrt_squares_back() {
        let a = UtpScalar::new(vec![4.0, 1.0, -0.5, 0.25]).unwrap();
        let r = a.sqrt().unwrap();
        assert_coeffs_eq(&(&r * &r), a.coeffs(), 1e-14);
    }

    #[test]
    fn sin_cos_of_t() {
        // sin(T) = T - T³/6, cos(T) = 1 - T²/2 + T⁴/24
        let x = UtpScalar::variable(0.0, 5);
        let (s, c) = x.sin_cos();
        assert_coeffs_eq(&s, &[0.0, 1.0, 0.0, -1.0 / 6.0, 0.0], 1e-15);
        assert_coeffs_eq(&c, &[1.0, 0.0, -0.5, 0.0, 1.0 / 24.0], 1e-15);
    }

    #[test]
    fn cos_coefficient_matches_central_difference() {
        // d/dx cos(x) at x = 0.7 via central differences, h = 1e-5.
        let x = UtpScalar::variable(0.7, 2);
        let c1 = x.cos().coeff(1);
        let h = 1e-5f64;
        let fd = ((0.7 + h).cos() - (0.7 - h).cos()) / (2.0 * h);
        assert_relative_eq!(c1, fd, epsilon = 1e-8);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let a = UtpScalar::new(vec![1.1, -0.3, 0.8]).unwrap();
        let by_mul = &(&a * &a) * &a;
        assert_coeffs_eq(&a.powi(3), by_mul.coeffs(), 1e-14);
        assert_coeffs_eq(&a.powi(0), UtpScalar::one(3).coeffs(), 0.0);
    }

    #[test]
    fn eval_horner() {
        let a = UtpScalar::new(vec![2.0, -1.0, 3.0]).unwrap();
        assert_relative_eq!(a.eval(0.5), 2.0 - 0.5 + 0.75, epsilon = 1e-15);
    }

    #[test]
    fn window_changes_degree_explicitly() {
        let a = UtpScalar::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_coeffs_eq(&a.window(1, 3), &[2.0, 3.0], 0.0);
        assert_coeffs_eq(&a.window(0, 4), a.coeffs(), 0.0);
    }

    #[test]
    #[should_panic(expected = "degree mismatch")]
    fn mixed_degrees_panic() {
        let _ = &UtpScalar::one(2) + &UtpScalar::one(3);
    }

    #[test]
    fn constructors_reject_non_finite() {
        assert_eq!(UtpScalar::new(vec![]), Err(Error::NonFinite));
        assert_eq!(UtpScalar::new(vec![1.0, f64::NAN]), Err(Error::NonFinite));
        assert_eq!(UtpScalar::new(vec![f64::INFINITY]), Err(Error::NonFinite));
    }

    #[test]
    fn derivative_consistency_sin_cos() {
        // (d+1)·s[d+1] = Σ_{k=0}^{d} (k+1)·a[k+1]·c[d-k]  (chain rule for sin)
        let a = UtpScalar::new(vec![0.4, 1.7, -0.6, 0.9, 0.2, -1.1]).unwrap();
        let (s, c) = a.sin_cos();
        for d in 0..a.degree() - 1 {
            let lhs = (d + 1) as f64 * s.coeff(d + 1);
            let mut rhs = 0.0;
            for k in 0..=d {
                rhs += (k + 1) as f64 * a.coeff(k + 1) * c.coeff(d - k);
            }
            assert_relative_eq!(lhs, rhs, epsilon = 1e-13, max_relative = 1e-13);
        }
    }
}

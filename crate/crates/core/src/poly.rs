//! Polynomial test functions `h(z) = a1 z + a2 z^2 + ... + am z^m`.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::{Error, Result};

/// A polynomial with zero constant term. `coeffs[k]` multiplies `z^(k+1)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestFunction {
    coeffs: Vec<Complex64>,
}

impl TestFunction {
    /// Builds `h` from `(a1, a2, ...)`. Trailing zero coefficients are dropped.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs
            .last()
            .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "test function must have a nonzero coefficient",
            ));
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::Domain("test function coefficients must be finite"));
        }
        Ok(TestFunction { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `h(z) = z^k`.
    pub fn monomial(k: usize) -> Self {
        assert!(k >= 1, "monomial degree must be at least 1");
        let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); k];
        coeffs[k - 1] = Complex64::new(1.0, 0.0);
        TestFunction { coeffs }
    }

    /// `h(z) = a2 z^2 + a1 z`.
    pub fn quadratic(a2: Complex64, a1: Complex64) -> Result<Self> {
        Self::new(alloc::vec![a1, a2])
    }

    /// Particle-number-fluctuation test function `x(1 - x) = -x^2 + x`.
    pub fn pnf() -> Self {
        TestFunction {
            coeffs: alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree, and for `k = 0`).
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs
            .get(k - 1)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_quadratic(&self) -> bool {
        self.degree() <= 2
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = (acc + c) * z;
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Sum of `a_k * p_k` for power sums `p_k = sum_i lambda_i^k`, `p[k-1]`.
    pub fn apply_power_sums(&self, power_sums: &[f64]) -> Complex64 {
        self.coeffs.iter().zip(power_sums).map(|(c, p)| c * p).sum()
    }

    /// Polynomial divided difference `(h(a) - h(b)) / (a - b)`, evaluated as
    /// `sum_k a_k sum_{i+j=k-1} a^i b^j` so that `a = b` gives `h'(a)`.
    pub fn divided_difference(&self, a: Complex64, b: Complex64) -> Complex64 {
        // inner_k = sum_{i+j=k-1} a^i b^j obeys inner_{k+1} = a * inner_k + b^k.
        let mut total = Complex64::new(0.0, 0.0);
        let mut inner = Complex64::new(1.0, 0.0);
        let mut b_pow = Complex64::new(1.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                b_pow *= b;
                inner = a * inner + b_pow;
            }
            total += c * inner;
        }
        total
    }
}

//! Piecewise Chebyshev interpolation on `[0, r_max]`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::Result;

pub(crate) const NODES: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ChebTable {
    r_max: f64,
    width: f64,
    /// `NODES` coefficients per segment.
    coeffs: Vec<f64>,
}

impl ChebTable {
    /// Samples `f` at Chebyshev points of every segment of width at most
    /// `max_width`.
    pub(crate) fn build<F: FnMut(f64) -> Result<f64>>(
        mut f: F,
        r_max: f64,
        max_width: f64,
    ) -> Result<Self> {
        let segments = libm::ceil(r_max / max_width).max(1.0) as usize;
        let width = r_max / segments as f64;
        let mut coeffs = Vec::with_capacity(segments * NODES);
        let mut values = [0.0; NODES];
        for s in 0..segments {
            let a = s as f64 * width;
            for (k, v) in values.iter_mut().enumerate() {
                let t = libm::cos(PI * (k as f64 + 0.5) / NODES as f64);
                *v = f(a + 0.5 * width * (t + 1.0))?;
            }
            for j in 0..NODES {
                let mut c = 0.0;
                for (k, v) in values.iter().enumerate() {
                    c += v * libm::cos(PI * j as f64 * (k as f64 + 0.5) / NODES as f64);
                }
                let norm = if j == 0 { 1.0 } else { 2.0 };
                coeffs.push(norm * c / NODES as f64);
            }
        }
        Ok(ChebTable {
            r_max,
            width,
            coeffs,
        })
    }

    /// Segment boundaries, for use as quadrature breakpoints.
    pub(crate) fn breaks(&self) -> Vec<f64> {
        let n = self.coeffs.len() / NODES;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.r_max
                } else {
                    i as f64 * self.width
                }
            })
            .collect()
    }

    pub(crate) fn eval(&self, r: f64) -> f64 {
        if !(0.0..=self.r_max).contains(&r) {
            return 0.0;
        }
        let n = self.coeffs.len() / NODES;
        let s = ((r / self.width) as usize).min(n - 1);
        let a = s as f64 * self.width;
        let t = 2.0 * (r - a) / self.width - 1.0;
        let c = &self.coeffs[s * NODES..(s + 1) * NODES];
        // Clenshaw recurrence.
        let (mut b1, mut b2) = (0.0, 0.0);
        for &cj in c[1..].iter().rev() {
            let b0 = cj + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        c[0] + t * b1 - b2
    }
}

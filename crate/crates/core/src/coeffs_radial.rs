//! Closed-form coefficients for radial symbols and quadratic `h`.
//!
//! With `I_k = ∫_0^∞ r^k sigma_check(r)^2 dr` and `h(z) = a2 z^2 + a1 z`:
//!
//! ```text
//! c2 = |P| / (2 pi) ∫_0^∞ R h(sigma(R)) dR
//! c1 = -2 |∂P| I_2                       (times a2)
//! c0 = sum_X f(gamma_X) / 2 * I_3         (times a2)
//! ```
//!
//! and per edge `a1 = -2 I_2`, `a0 = -(pi/4) I_3`; per corner
//! `b0 = (1 - gamma cot gamma) / 2 * I_3`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::geometry::{angle_function_f, check_corner_angle, cot, Polygon};
use crate::quadrature::{integrate_named, panels, QuadratureSpec};
use crate::symbols::{KernelMoments, RadialKernel, RadialSymbol};
use crate::{Error, Result, TestFunction};

/// Constant coefficient for a domain with smooth boundary and quadratic
/// `h`. It vanishes identically; it is a known constant, not computed.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmoothBaseline {
    pub b0: f64,
}

pub const SMOOTH_BASELINE: SmoothBaseline = SmoothBaseline { b0: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeTerm {
    pub length: f64,
    /// `F(E) = -cot(gamma_start) - cot(gamma_end)`.
    pub f: f64,
    pub a1: Complex64,
    pub a0: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexTerm {
    pub angle: f64,
    pub b0: Complex64,
}

/// `(c2, c1, c0)` with the per-edge and per-corner breakdowns.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoefficientSet {
    pub c2: Complex64,
    pub c1: Complex64,
    pub c0: Complex64,
    pub per_edge: Vec<EdgeTerm>,
    pub per_vertex: Vec<VertexTerm>,
    pub moments: KernelMoments,
    pub symbol: String,
    pub h: TestFunction,
    pub spec: QuadratureSpec,
}

impl CoefficientSet {
    /// `L^2 c2 + L c1 + c0`.
    pub fn asymptotic_trace(&self, l: f64) -> Complex64 {
        asymptotic_trace(self.c2, self.c1, self.c0, l)
    }

    /// `sum_E |E| a1(E)`.
    pub fn c1_from_edges(&self) -> Complex64 {
        self.per_edge.iter().map(|e| e.a1 * e.length).sum()
    }

    /// `sum_E F(E) a0(E) + sum_X b0(X)`.
    pub fn c0_from_breakdown(&self) -> Complex64 {
        let edges: Complex64 = self.per_edge.iter().map(|e| e.a0 * e.f).sum();
        let corners: Complex64 = self.per_vertex.iter().map(|v| v.b0).sum();
        edges + corners
    }
}

pub fn asymptotic_trace(c2: Complex64, c1: Complex64, c0: Complex64, l: f64) -> Complex64 {
    c2 * (l * l) + c1 * l + c0
}

/// `c2 = |P| / (2 pi) ∫_0^∞ R h(sigma(R)) dR` for any polynomial `h`.
pub fn c2_radial(
    p: &Polygon,
    h: &TestFunction,
    sigma: &RadialSymbol,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if sigma.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let upper = sigma.integration_radius(spec);
    let pts = panels(0.0, upper, 0.5);
    let re = integrate_named(
        "bulk coefficient c2 (real part)",
        |r| r * h.eval_real(sigma.eval(r)).re,
        &pts,
        spec,
    )?
    .value;
    let im = if h.is_real() {
        0.0
    } else {
        integrate_named(
            "bulk coefficient c2 (imaginary part)",
            |r| r * h.eval_real(sigma.eval(r)).im,
            &pts,
            spec,
        )?
        .value
    };
    Ok(Complex64::new(re, im) * (p.area() / (2.0 * PI)))
}

/// `c1 = -2 |∂P| I_2` for `h(z) = z^2`.
pub fn c1_radial(p: &Polygon, m: &KernelMoments) -> f64 {
    -2.0 * p.perimeter() * m.i2
}

/// `c0 = sum_X f(gamma_X) / 2 * I_3` for `h(z) = z^2`.
pub fn c0_radial(p: &Polygon, m: &KernelMoments) -> f64 {
    let weight: f64 = p
        .corners()
        .iter()
        .map(|c| 0.5 * angle_function_f(c.angle).expect("polygon angles lie in (0, 2 pi)"))
        .sum();
    weight * m.i3
}

/// Corner constant `b0 = (1 - gamma cot gamma) / 2 * I_3`, for convex and
/// concave corners alike.
pub fn b0_closed(gamma: f64, m: &KernelMoments) -> Result<f64> {
    check_corner_angle(gamma)?;
    Ok(0.5 * (1.0 - gamma * cot(gamma)) * m.i3)
}

/// Strip coefficient per unit edge length, `a1 = -2 I_2`.
pub fn a1_radial(m: &KernelMoments) -> f64 {
    -2.0 * m.i2
}

/// Edge coefficient `a0 = -(pi/4) I_3`.
pub fn a0_radial(m: &KernelMoments) -> f64 {
    -0.25 * PI * m.i3
}

/// All three coefficients for `h(z) = a2 z^2 + a1 z`.
pub fn coefficients(
    p: &Polygon,
    h: &TestFunction,
    sigma: &RadialSymbol,
    spec: &QuadratureSpec,
) -> Result<CoefficientSet> {
    let kernel = RadialKernel::from_symbol(sigma, spec)?;
    coefficients_with_kernel(p, h, sigma, &kernel, spec)
}

/// As [`coefficients`] with a precomputed kernel of `sigma`.
pub fn coefficients_with_kernel(
    p: &Polygon,
    h: &TestFunction,
    sigma: &RadialSymbol,
    kernel: &RadialKernel,
    spec: &QuadratureSpec,
) -> Result<CoefficientSet> {
    if !h.is_quadratic() {
        return Err(Error::Domain(
            "closed-form coefficients need a test function of degree <= 2",
        ));
    }
    spec.validate()?;
    let a2 = h.coeff(2);
    let m = KernelMoments::of(kernel, spec)?;
    let c2 = c2_radial(p, h, sigma, spec)?;
    let a1 = a1_radial(&m);
    let a0 = a0_radial(&m);
    let per_edge: Vec<EdgeTerm> = p
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| EdgeTerm {
            length: e.length,
            f: p.edge_f(i).expect("edge index in range"),
            a1: a2 * a1,
            a0: a2 * a0,
        })
        .collect();
    let per_vertex: Vec<VertexTerm> = p
        .corners()
        .iter()
        .map(|c| {
            Ok(VertexTerm {
                angle: c.angle,
                b0: a2 * b0_closed(c.angle, &m)?,
            })
        })
        .collect::<Result<_>>()?;
    let c1: Complex64 = per_edge.iter().map(|e| e.a1 * e.length).sum();
    let c0 = a2 * c0_radial(p, &m);
    Ok(CoefficientSet {
        c2,
        c1,
        c0,
        per_edge,
        per_vertex,
        moments: m,
        symbol: String::from(sigma.label()),
        h: h.clone(),
        spec: *spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_moments() -> KernelMoments {
        KernelMoments {
            i2: libm::sqrt(PI) / (16.0 * PI * PI),
            i3: 1.0 / (8.0 * PI * PI),
        }
    }

    #[test]
    fn closed_form_values() {
        let m = gaussian_moments();
        let sq = Polygon::unit_square();
        assert!((c1_radial(&sq, &m) + 0.089_793_5).abs() < 1e-7);
        assert!((c1_radial(&sq, &m) + libm::sqrt(PI) / (2.0 * PI * PI)).abs() < 1e-16);
        let hex = Polygon::regular(6, 1.0).unwrap();
        assert!((c1_radial(&hex, &m) + 12.0 * m.i2).abs() < 1e-15);
        assert!((c1_radial(&hex, &m) + 0.134_690_34).abs() < 1e-8);
        assert!((c0_radial(&sq, &m) - 1.0 / (4.0 * PI * PI)).abs() < 1e-16);
        let tri = Polygon::equilateral_triangle();
        assert!((c0_radial(&tri, &m) - 0.041_969_76).abs() < 1e-8);
        assert!((c0_radial(&Polygon::l_shape(), &m) - 3.0 * m.i3).abs() < 1e-15);
        assert!((c0_radial(&Polygon::l_shape(), &m) - 0.037_995_4).abs() < 1e-7);
    }

    #[test]
    fn corner_and_edge_constants() {
        let m = gaussian_moments();
        let quarter = 1.0 / (16.0 * PI * PI);
        assert!((b0_closed(PI / 2.0, &m).unwrap() - quarter).abs() < 1e-17);
        assert!((b0_closed(1.5 * PI, &m).unwrap() - quarter).abs() < 1e-16);
        let want = 0.5 * (1.0 - PI / (3.0 * libm::sqrt(3.0))) * m.i3;
        assert!((b0_closed(PI / 3.0, &m).unwrap() - want).abs() < 1e-16);
        assert!((b0_closed(PI / 3.0, &m).unwrap() - 0.002_503_90).abs() < 1e-8);
        assert!(b0_closed(PI, &m).is_err());
        assert!(b0_closed(0.0, &m).is_err());
        assert!(b0_closed(2.0 * PI, &m).is_err());
        assert!((a1_radial(&m) + 0.022_448_39).abs() < 1e-8);
        assert!((a0_radial(&m) + 1.0 / (32.0 * PI)).abs() < 1e-17);
        let zero = KernelMoments { i2: 0.0, i3: 0.0 };
        assert_eq!(a1_radial(&zero), 0.0);
        assert_eq!(a0_radial(&zero), 0.0);
    }

    #[test]
    fn edge_aggregate_for_triangle() {
        let m = gaussian_moments();
        let tri = Polygon::equilateral_triangle();
        let lhs: f64 = (0..3).map(|e| tri.edge_f(e).unwrap() * a0_radial(&m)).sum();
        let rhs = 0.5 * PI * 3.0 * cot(PI / 3.0) * m.i3;
        assert!((lhs - rhs).abs() < 1e-12);
        assert!((rhs - 0.5 * PI * libm::sqrt(3.0) * m.i3).abs() < 1e-15);
    }

    #[test]
    fn square_coefficients() {
        let spec = QuadratureSpec::default();
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let sq = Polygon::unit_square();
        let cs = coefficients(&sq, &TestFunction::monomial(2), &g, &spec).unwrap();
        assert!((cs.c2.re - 1.0 / (4.0 * PI)).abs() < 1e-10);
        assert!((cs.c1.re + 0.089_793_5).abs() < 1e-7);
        assert!((cs.c0.re - 0.025_330_30).abs() < 1e-8);
        assert!((cs.asymptotic_trace(1.0).re - 0.015_114_27).abs() < 1e-7);
        assert!((cs.c1 - cs.c1_from_edges()).norm() < 1e-12);
        assert!((cs.c0 - cs.c0_from_breakdown()).norm() < 1e-12);

        let lin = coefficients(&sq, &TestFunction::from_real(&[1.0]).unwrap(), &g, &spec).unwrap();
        assert!((lin.c2.re - 1.0 / (2.0 * PI)).abs() < 1e-10);
        assert_eq!(lin.c1.re, 0.0);
        assert_eq!(lin.c0.re, 0.0);

        let both = coefficients(
            &sq,
            &TestFunction::from_real(&[1.0, 1.0]).unwrap(),
            &g,
            &spec,
        )
        .unwrap();
        assert!((both.c2.re - (1.0 / (4.0 * PI) + 1.0 / (2.0 * PI))).abs() < 1e-10);
        assert_eq!(both.c1, cs.c1);
        assert_eq!(both.c0, cs.c0);

        let pnf = coefficients(&sq, &TestFunction::pnf(), &g, &spec).unwrap();
        assert_eq!(pnf.c1, -cs.c1);
        assert_eq!(pnf.c0, -cs.c0);

        let cubic = coefficients(&sq, &TestFunction::monomial(3), &g, &spec);
        assert!(matches!(cubic, Err(Error::Domain(_))));
    }

    #[test]
    fn complex_linear_part() {
        let spec = QuadratureSpec::default();
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let sq = Polygon::unit_square();
        let h =
            TestFunction::quadratic(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)).unwrap();
        let cs = coefficients(&sq, &h, &g, &spec).unwrap();
        assert!((cs.c2.im - 2.0 / (2.0 * PI)).abs() < 1e-10);
        assert_eq!(cs.c1.im, 0.0);
        assert_eq!(cs.c0.im, 0.0);
    }

    #[test]
    fn scaling_relation() {
        let spec = QuadratureSpec::default();
        let g = RadialSymbol::gaussian(1.0).unwrap();
        let p = Polygon::l_shape();
        let h = TestFunction::from_real(&[0.3, 1.0]).unwrap();
        let small = coefficients(&p, &h, &g, &spec).unwrap();
        let big = coefficients(&p.scale(2.0).unwrap(), &h, &g, &spec).unwrap();
        assert!((big.c2 - small.c2 * 4.0).norm() < 1e-10);
        for l in [1.0, 2.5, 7.0] {
            let lhs = small.asymptotic_trace(2.0 * l);
            let rhs = big.asymptotic_trace(l);
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm());
        }
        let c = asymptotic_trace(
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            10.0,
        );
        assert_eq!(c, Complex64::new(123.0, 0.0));
    }
}

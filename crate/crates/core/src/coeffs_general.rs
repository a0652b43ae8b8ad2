//! Strip and edge coefficients through one-dimensional Wiener-Hopf traces.
//!
//! For a radial symbol every edge sees the same family of slices
//! `sigma_t(xi) = sigma(sqrt(t^2 + xi^2))`, and
//!
//! ```text
//! a1 = (2 pi)^-1 ∫ dt tr[h(W(sigma_t)) - W(h ∘ sigma_t)]
//! a0 = (2 pi)^-1 ∫ dt tr(M(x) [h(W(sigma_t)) - W(h ∘ sigma_t)])
//! ```
//!
//! For `h(z) = z^2` the half-line traces reduce to
//! `tr(M(x^α)[W(s)^2 - W(s^2)]) = -∫_0^∞ y^{α+1}/(α+1) s_check(y)^2 dy`.
//! For general polynomial `h`, `a1` is also available as the double
//! principal-value integral
//!
//! ```text
//! a1 = (8 pi^3)^-1 ∫ dt ∫ dξ1 PV∫ dξ2 [h(s(ξ1)) - h(s(ξ2))] / [s(ξ1) - s(ξ2)] * s'(ξ2) / (ξ2 - ξ1).
//! ```
//!
//! Both routes are valid for symbols of Schwartz class; for the merely
//! integrable-with-derivatives class they are used as is.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::quadrature::{integrate_named, kronrod_nodes, panels, QuadratureSpec};
use crate::symbols::{RadialSymbol, Slice1D};
use crate::{Error, Result, TestFunction};

/// Principal-value integration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PvSpec {
    /// Half-width of the symmetric excision `|ξ2 - ξ1| > delta`.
    pub delta: f64,
    /// Outer truncation of `ξ1`; defaults to the slice support.
    pub xi_max: Option<f64>,
    /// Largest acceptable Richardson residual.
    pub tolerance: f64,
    /// Panel width of the fixed composite 21-point rules (doubled in `t`).
    pub panel: f64,
}

impl Default for PvSpec {
    fn default() -> Self {
        PvSpec {
            delta: 1e-2,
            xi_max: None,
            tolerance: 1e-4,
            panel: 0.5,
        }
    }
}

impl PvSpec {
    fn validate(&self) -> Result<()> {
        let positive = self.delta > 0.0
            && self.xi_max.is_none_or(|x| x > 0.0)
            && self.tolerance > 0.0
            && self.panel > 0.0;
        if !positive || self.delta >= self.panel {
            return Err(Error::Domain(
                "principal value spec needs positive delta < panel, xi_max, tolerance",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PvResult {
    /// Richardson-extrapolated value `2 a(delta/2) - a(delta)`.
    pub value: f64,
    /// `|a(delta/2) - a(delta)|`.
    pub residual: f64,
    pub delta: f64,
}

/// Half-line trace for one slice.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HalfLineTrace {
    pub alpha: u8,
    pub t: f64,
    pub value: f64,
    pub y_max: f64,
}

/// Slice cosine transform on fixed composite Kronrod nodes, resolved for
/// `|y| <= y_max`: `sigma_check_t(y) = pi^-1 Σ w_j sigma_t(ξ_j) cos(y ξ_j)`.
struct SliceCosine {
    nodes: Vec<(f64, f64)>,
}

impl SliceCosine {
    fn new(slice: &Slice1D, y_max: f64, spec: &QuadratureSpec) -> Self {
        let support = slice.support(spec);
        if support == 0.0 {
            return SliceCosine { nodes: Vec::new() };
        }
        let width = (PI / y_max.max(1.0)).min(0.5);
        let nodes = kronrod_nodes(&panels(0.0, support, width))
            .into_iter()
            .map(|(xi, w)| (xi, w * slice.eval(xi) / PI))
            .collect();
        SliceCosine { nodes }
    }

    fn eval(&self, y: f64) -> f64 {
        self.nodes
            .iter()
            .map(|&(xi, w)| w * libm::cos(y * xi))
            .sum()
    }
}

/// Truncation in `y` for the slice kernels of `sigma`: beyond it
/// `y^2 sigma_check_0(y)^2` stays below `1e-16` (scanned at `t = 0`, the
/// slowest-decaying slice, with a 25% margin).
fn slice_y_max(sigma: &RadialSymbol, spec: &QuadratureSpec) -> Result<f64> {
    const SCAN_LIMIT: f64 = 100.0;
    let table = SliceCosine::new(&sigma.slice(0.0), SCAN_LIMIT, spec);
    let mut y = 0.5;
    let mut run = 0;
    let mut start = y;
    while y < SCAN_LIMIT {
        let k = table.eval(y);
        if k * k * y.max(1.0) * y.max(1.0) < 1e-16 {
            if run == 0 {
                start = y;
            }
            run += 1;
            if run >= 8 {
                return Ok(1.25 * start);
            }
        } else {
            run = 0;
        }
        y += 0.5;
    }
    Err(Error::QuadratureNonConvergence {
        integral: "slice kernel truncation",
        value: y,
        error: f64::INFINITY,
    })
}

fn halfline_with_cutoff(
    slice: &Slice1D,
    alpha: u8,
    y_max: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if slice.support(spec) == 0.0 || slice.symbol().is_zero() {
        return Ok(0.0);
    }
    let table = SliceCosine::new(slice, y_max, spec);
    let weight = 1.0 / (alpha as f64 + 1.0);
    let e = integrate_named(
        "half-line trace",
        |y| {
            let k = table.eval(y);
            weight * libm::pow(y, alpha as f64 + 1.0) * k * k
        },
        &panels(0.0, y_max, 1.0),
        spec,
    )?;
    Ok(-e.value)
}

/// `tr(M(x^α)[W(sigma_t)^2 - W(sigma_t^2)])` for `α ∈ {0, 1}`.
pub fn wh_quadratic_halfline(
    slice: &Slice1D,
    alpha: u8,
    spec: &QuadratureSpec,
) -> Result<HalfLineTrace> {
    if alpha > 1 {
        return Err(Error::Domain("half-line weight exponent must be 0 or 1"));
    }
    let y_max = slice_y_max(slice.symbol(), spec)?;
    let value = halfline_with_cutoff(slice, alpha, y_max, spec)?;
    Ok(HalfLineTrace {
        alpha,
        t: slice.t(),
        value,
        y_max,
    })
}

/// `(2 pi)^-1 ∫_{-t_max}^{t_max} dt tr(M(x^α)[W(sigma_t)^2 - W(sigma_t^2)])`.
pub fn strip_integral(
    sigma: &RadialSymbol,
    alpha: u8,
    t_max: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if alpha > 1 {
        return Err(Error::Domain("half-line weight exponent must be 0 or 1"));
    }
    if sigma.is_zero() {
        return Ok(0.0);
    }
    let y_max = slice_y_max(sigma, spec)?;
    let inner = spec.with_tolerances(spec.abs_tol * 1e-2, spec.rel_tol);
    let mut failure = None;
    // Even in t.
    let e = integrate_named(
        "strip integral over t",
        |t| match halfline_with_cutoff(&sigma.slice(t), alpha, y_max, &inner) {
            Ok(v) => v,
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        },
        &panels(0.0, t_max, 0.5),
        spec,
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(e.value / PI)
}

/// `a1` for `h(z) = z^2` from half-line traces.
pub fn a1_via_halfline(sigma: &RadialSymbol, spec: &QuadratureSpec) -> Result<f64> {
    strip_integral(sigma, 0, sigma.integration_radius(spec), spec)
}

/// `a0` for `h(z) = z^2` from `M(x)`-weighted half-line traces.
pub fn a0_via_halfline(sigma: &RadialSymbol, spec: &QuadratureSpec) -> Result<f64> {
    strip_integral(sigma, 1, sigma.integration_radius(spec), spec)
}

/// Polynomial divided difference of `h`, regular on the diagonal.
pub fn divided_difference(h: &TestFunction, a: Complex64, b: Complex64) -> Complex64 {
    h.divided_difference(a, b)
}

/// The `(ξ1, ξ2)` double integral at fixed `t`, with excisions `delta`
/// and `delta / 2`.
fn pv_slice_integral(
    slice: &Slice1D,
    h: &TestFunction,
    delta: f64,
    pv: &PvSpec,
    spec: &QuadratureSpec,
) -> (f64, f64) {
    let support = slice.support(spec);
    if support == 0.0 {
        return (0.0, 0.0);
    }
    let x = pv.xi_max.unwrap_or(f64::INFINITY).min(support);
    let dd = |a: f64, b: f64| {
        h.divided_difference(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
            .re
    };

    // PV∫ F(ξ2)/(ξ2 - ξ1) dξ2 with F(ξ2) = dd(s(ξ1), s(ξ2)) s'(ξ2), paired
    // as ∫_δ [F(ξ1+u) - F(ξ1-u)] / u du so the F(ξ1)/u part cancels.
    let inner = |xi1: f64| -> (f64, f64) {
        let s1 = slice.eval(xi1);
        let f = |xi2: f64| {
            if libm::fabs(xi2) > x {
                return 0.0;
            }
            dd(s1, slice.eval(xi2)) * slice.derivative(xi2)
        };
        let upper = x + libm::fabs(xi1);
        if upper <= delta {
            return (0.0, 0.0);
        }
        let paired = |u: f64| (f(xi1 + u) - f(xi1 - u)) / u;
        let mut pts = panels(delta, upper, pv.panel);
        let kink = libm::fabs(x - libm::fabs(xi1));
        if kink > delta && kink < upper {
            pts.push(kink);
            pts.sort_by(|a, b| a.total_cmp(b));
        }
        let main: f64 = kronrod_nodes(&pts)
            .into_iter()
            .map(|(u, w)| w * paired(u))
            .sum();
        let extra: f64 = kronrod_nodes(&[0.5 * delta, delta])
            .into_iter()
            .map(|(u, w)| w * paired(u))
            .sum();
        (main, main + extra)
    };
    // Even in ξ1.
    let (mut coarse, mut fine) = (0.0, 0.0);
    for (xi1, w) in kronrod_nodes(&panels(0.0, x, pv.panel)) {
        let (c, f) = inner(xi1);
        coarse += w * c;
        fine += w * f;
    }

    // |ξ1| > X: s(ξ1) vanishes, and the ξ1 integral of 1/(ξ2 - ξ1) over
    // both tails is ln((X - ξ2)/(X + ξ2)).
    let tail: f64 = kronrod_nodes(&panels(-x, x, pv.panel))
        .into_iter()
        .map(|(xi2, w)| {
            let lg = libm::log((x - xi2) / (x + xi2));
            w * dd(0.0, slice.eval(xi2)) * slice.derivative(xi2) * lg
        })
        .sum();
    (2.0 * coarse + tail, 2.0 * fine + tail)
}

/// `a1` at excisions `delta` and `delta / 2`.
fn a1_pv_pair(
    sigma: &RadialSymbol,
    h: &TestFunction,
    pv: &PvSpec,
    spec: &QuadratureSpec,
) -> (f64, f64) {
    let t_max = sigma.integration_radius(spec);
    let (mut coarse, mut fine) = (0.0, 0.0);
    for (t, w) in kronrod_nodes(&panels(0.0, t_max, 2.0 * pv.panel)) {
        let (c, f) = pv_slice_integral(&sigma.slice(t), h, pv.delta, pv, spec);
        coarse += w * c;
        fine += w * f;
    }
    // Even in t.
    let norm = 2.0 / (8.0 * PI * PI * PI);
    (norm * coarse, norm * fine)
}

/// `a1` for polynomial `h` from the principal-value formula, extrapolated
/// from excisions `delta` and `delta / 2`.
pub fn a1_pv(
    sigma: &RadialSymbol,
    h: &TestFunction,
    pv: &PvSpec,
    spec: &QuadratureSpec,
) -> Result<PvResult> {
    pv.validate()?;
    if sigma.is_zero() {
        return Ok(PvResult {
            value: 0.0,
            residual: 0.0,
            delta: pv.delta,
        });
    }
    if !h.is_real() {
        return Err(Error::Domain(
            "principal value route needs a real test function",
        ));
    }
    let (coarse, fine) = a1_pv_pair(sigma, h, pv, spec);
    if !(coarse.is_finite() && fine.is_finite()) {
        return Err(Error::PvNonConvergence {
            residual: f64::INFINITY,
            tolerance: pv.tolerance,
        });
    }
    let residual = libm::fabs(fine - coarse);
    if residual > pv.tolerance {
        return Err(Error::PvNonConvergence {
            residual,
            tolerance: pv.tolerance,
        });
    }
    Ok(PvResult {
        value: 2.0 * fine - coarse,
        residual,
        delta: pv.delta,
    })
}

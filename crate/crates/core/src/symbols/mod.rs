//! Radial symbols `sigma(R)`, their kernels `sigma_check(r)` (the 2-D radial
//! inverse Fourier transform) and 1-D slices `sigma_t(xi) = sigma(sqrt(t^2 + xi^2))`.
//!
//! Normalization: `sigma_check(x) = (2 pi)^-2 ∫ sigma(xi) e^{i x.xi} dxi`, so
//! for radial symbols
//!
//! ```text
//! sigma_check(r) = (2 pi)^-1 ∫_0^∞ sigma(R) J0(r R) R dR.
//! ```

mod bessel;
mod chebyshev;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

pub use bessel::bessel_j0;
use chebyshev::ChebTable;

use crate::quadrature::{integrate_named, panels, QuadratureSpec};
use crate::{Error, Result};

/// `|sigma(R)| R` below this counts as numerically zero.
pub const SYMBOL_DECAY_THRESHOLD: f64 = 1e-16;

/// Numeric kernels are truncated once `|sigma_check(r)| r^4` stays below this.
pub const KERNEL_DECAY_THRESHOLD: f64 = 1e-8;

/// Closed-form kernels are truncated once `|sigma_check(r)| r^4` drops below this.
const CLOSED_KERNEL_THRESHOLD: f64 = 1e-24;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Gaussian {
        width: f64,
    },
    Fermi {
        mu: f64,
        temperature: f64,
    },
    Zero,
    Custom {
        value: RealFn,
        derivative: Option<RealFn>,
    },
}

/// Real radial symbol `R -> amplitude * shape(R)`.
#[derive(Clone)]
pub struct RadialSymbol {
    shape: Shape,
    amplitude: f64,
    decay_radius: f64,
    label: String,
}

impl fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialSymbol")
            .field("label", &self.label)
            .field("amplitude", &self.amplitude)
            .field("decay_radius", &self.decay_radius)
            .finish()
    }
}

/// Smallest `R` past which `|g(R)| R` stays below `threshold`, assuming the
/// tail of `g` is eventually monotone. Returns `None` if not found below `cap`.
fn decay_radius_of<G: Fn(f64) -> f64>(g: G, threshold: f64, cap: f64) -> Option<f64> {
    let small = |r: f64| libm::fabs(g(r)) * r < threshold;
    let mut hi = 1.0;
    // Require a run of small samples so an oscillating zero does not fool us.
    let run_ok = |r: f64| (0..8).all(|k| small(r * (1.0 + 0.05 * k as f64)));
    while !run_ok(hi) {
        hi *= 1.5;
        if hi > cap {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if small(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

impl RadialSymbol {
    /// `sigma(R) = exp(-R^2 / (2 width^2))`.
    pub fn gaussian(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Domain("gaussian width must be positive"));
        }
        Self::build(
            Shape::Gaussian { width },
            1.0,
            alloc::format!("gaussian:width={width}"),
        )
    }

    /// Fermi-Dirac symbol `sigma(R) = 1 / (1 + exp((R^2 - mu) / T))`.
    pub fn fermi(mu: f64, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain("fermi temperature must be positive"));
        }
        if !mu.is_finite() {
            return Err(Error::Domain("fermi chemical potential must be finite"));
        }
        Self::build(
            Shape::Fermi { mu, temperature },
            1.0,
            alloc::format!("fermi:mu={mu},T={temperature}"),
        )
    }

    pub fn zero() -> Self {
        RadialSymbol {
            shape: Shape::Zero,
            amplitude: 0.0,
            decay_radius: 0.0,
            label: String::from("zero"),
        }
    }

    /// User-supplied symbol. Without `derivative`, `sigma'` is taken by
    /// fourth-order central differences.
    pub fn custom(
        label: &str,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: Option<RealFn>,
        decay_radius: f64,
    ) -> Result<Self> {
        if !(decay_radius > 0.0 && decay_radius.is_finite()) {
            return Err(Error::Domain("decay radius must be positive"));
        }
        Ok(RadialSymbol {
            shape: Shape::Custom {
                value: Arc::new(value),
                derivative,
            },
            amplitude: 1.0,
            decay_radius,
            label: String::from(label),
        })
    }

    fn build(shape: Shape, amplitude: f64, label: String) -> Result<Self> {
        let mut s = RadialSymbol {
            shape,
            amplitude,
            decay_radius: 0.0,
            label,
        };
        if amplitude != 0.0 {
            s.decay_radius = decay_radius_of(|r| s.eval(r), SYMBOL_DECAY_THRESHOLD, 1e6)
                .ok_or(Error::Domain("symbol does not decay"))?;
        }
        Ok(s)
    }

    /// `c * sigma`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut s = self.clone();
        s.amplitude *= factor;
        s.label = alloc::format!("{factor}*{}", self.label);
        if factor == 0.0 {
            s.decay_radius = 0.0;
        } else if libm::fabs(factor) > 1.0 {
            // |c sigma(R)| R crosses the threshold further out.
            let base = self.clone();
            s.decay_radius =
                decay_radius_of(|r| factor * base.eval(r), SYMBOL_DECAY_THRESHOLD, 1e6)
                    .unwrap_or(self.decay_radius);
        }
        s
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn decay_radius(&self) -> f64 {
        self.decay_radius
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0 || matches!(self.shape, Shape::Zero)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let base = match &self.shape {
            Shape::Gaussian { width } => libm::exp(-r * r / (2.0 * width * width)),
            Shape::Fermi { mu, temperature } => {
                let u = (r * r - mu) / temperature;
                if u > 0.0 {
                    let e = libm::exp(-u);
                    e / (1.0 + e)
                } else {
                    1.0 / (1.0 + libm::exp(u))
                }
            }
            Shape::Zero => 0.0,
            Shape::Custom { value, .. } => value(r),
        };
        self.amplitude * base
    }

    /// `d sigma / dR`.
    pub fn derivative(&self, r: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { width } => -r / (width * width) * self.eval(r),
            Shape::Fermi { temperature, .. } => {
                let s = self.eval(r) / self.amplitude;
                -self.amplitude * s * (1.0 - s) * 2.0 * r / temperature
            }
            Shape::Zero => 0.0,
            Shape::Custom {
                derivative: Some(d),
                ..
            } => self.amplitude * d(r),
            Shape::Custom { .. } => {
                let h = 1e-4 * self.decay_radius.max(1e-3);
                (-self.eval(r + 2.0 * h) + 8.0 * self.eval(r + h) - 8.0 * self.eval(r - h)
                    + self.eval(r - 2.0 * h))
                    / (12.0 * h)
            }
        }
    }

    /// Radius beyond which the symbol is treated as zero in integrals.
    pub fn integration_radius(&self, spec: &QuadratureSpec) -> f64 {
        spec.symbol_r_max.unwrap_or(self.decay_radius)
    }

    /// Closed-form kernel when one is known (Gaussian, zero).
    pub fn closed_form_kernel(&self) -> Option<RadialKernel> {
        match self.shape {
            _ if self.is_zero() => Some(RadialKernel::zero()),
            // (2 pi)^-1 ∫ e^{-R^2/2w^2} J0(rR) R dR = w^2 e^{-w^2 r^2 / 2} / (2 pi)
            Shape::Gaussian { width } => {
                let amp = self.amplitude * width * width / (2.0 * PI);
                let w2 = width * width;
                let f = |r: f64| amp * libm::exp(-w2 * r * r / 2.0);
                let r_max = decay_radius_of(|r| f(r) * r * r * r, CLOSED_KERNEL_THRESHOLD, 1e6)
                    .unwrap_or(1e6);
                Some(RadialKernel {
                    repr: KernelRepr::Gaussian { amp, width },
                    r_max,
                    provenance: KernelProvenance::ClosedForm,
                })
            }
            _ => None,
        }
    }

    /// The 1-D slice at offset `t`.
    pub fn slice(&self, t: f64) -> Slice1D {
        Slice1D {
            symbol: self.clone(),
            t,
        }
    }
}

/// `(2 pi)^-1 ∫_0^∞ sigma(R) J0(r R) R dR` by adaptive quadrature on panels
/// of length at most `pi / (2 r)`.
pub fn hankel_transform_at(symbol: &RadialSymbol, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if symbol.is_zero() {
        return Ok(0.0);
    }
    let upper = symbol.integration_radius(spec);
    let r = libm::fabs(r);
    let max_len = if r > 0.0 {
        (PI / (2.0 * r)).min(0.5)
    } else {
        0.5
    };
    let pts = panels(0.0, upper, max_len);
    let e = integrate_named(
        "hankel transform",
        |rr| symbol.eval(rr) * bessel_j0(r * rr) * rr,
        &pts,
        spec,
    )?;
    Ok(e.value / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum KernelProvenance {
    ClosedForm,
    HankelNumeric,
}

#[derive(Debug, Clone, PartialEq)]
enum KernelRepr {
    Gaussian { amp: f64, width: f64 },
    Table(ChebTable),
    Zero,
}

/// The radial kernel `r -> sigma_check(r)` with a truncation radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialKernel {
    repr: KernelRepr,
    r_max: f64,
    provenance: KernelProvenance,
}

impl RadialKernel {
    pub fn zero() -> Self {
        RadialKernel {
            repr: KernelRepr::Zero,
            r_max: 0.0,
            provenance: KernelProvenance::ClosedForm,
        }
    }

    /// Closed form when the symbol carries one, numeric Hankel otherwise.
    pub fn from_symbol(symbol: &RadialSymbol, spec: &QuadratureSpec) -> Result<Self> {
        match symbol.closed_form_kernel() {
            Some(k) => Ok(k),
            None => Self::numeric(symbol, spec),
        }
    }

    /// Numeric Hankel transform, tabulated as piecewise Chebyshev
    /// interpolants on `[0, r_max]`.
    pub fn numeric(symbol: &RadialSymbol, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if symbol.is_zero() {
            return Ok(Self::zero());
        }
        let node_spec = spec.with_tolerances(spec.abs_tol * 1e-3, spec.rel_tol * 1e-3);
        let r_max = match spec.r_max {
            Some(r) => r,
            None => numeric_truncation(symbol, &node_spec)?,
        };
        let table = ChebTable::build(|r| hankel_transform_at(symbol, r, &node_spec), r_max, 0.5)?;
        Ok(RadialKernel {
            repr: KernelRepr::Table(table),
            r_max,
            provenance: KernelProvenance::HankelNumeric,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = libm::fabs(r);
        match &self.repr {
            KernelRepr::Gaussian { amp, width } => amp * libm::exp(-width * width * r * r / 2.0),
            KernelRepr::Table(t) => t.eval(r),
            KernelRepr::Zero => 0.0,
        }
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn provenance(&self) -> KernelProvenance {
        self.provenance
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, KernelRepr::Zero)
    }

    /// Quadrature breakpoints on `[0, r_max]` (interpolation segments).
    pub fn breaks(&self) -> Vec<f64> {
        match &self.repr {
            KernelRepr::Table(t) => t.breaks(),
            _ => panels(0.0, self.r_max, 1.0),
        }
    }

    /// `∫_0^{r_max} r^k sigma_check(r)^2 dr`.
    pub fn moment(&self, k: i32, spec: &QuadratureSpec) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let name = match k {
            2 => "kernel moment r^2",
            3 => "kernel moment r^3",
            _ => "kernel moment",
        };
        let e = integrate_named(
            name,
            |r| {
                let v = self.eval(r);
                libm::pow(r, k as f64) * v * v
            },
            &self.breaks(),
            spec,
        )?;
        Ok(e.value)
    }

    /// Forward radial transform `2 pi ∫_0^{r_max} sigma_check(r) J0(R r) r dr`,
    /// the inverse of the Hankel step.
    pub fn forward_transform(&self, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let max_len = if big_r > 0.0 {
            (PI / (2.0 * big_r)).min(0.5)
        } else {
            0.5
        };
        let mut pts = panels(0.0, self.r_max, max_len);
        pts.extend(self.breaks());
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        let e = integrate_named(
            "forward radial transform",
            |r| self.eval(r) * bessel_j0(big_r * r) * r,
            &pts,
            spec,
        )?;
        Ok(2.0 * PI * e.value)
    }
}

fn numeric_truncation(symbol: &RadialSymbol, spec: &QuadratureSpec) -> Result<f64> {
    let small = |r: f64| -> Result<bool> {
        let v = hankel_transform_at(symbol, r, spec)?;
        Ok(libm::fabs(v) * libm::pow(r.max(1.0), 4.0) < KERNEL_DECAY_THRESHOLD)
    };
    let step = 0.5;
    let mut r = 1.0;
    let mut run = 0;
    let mut run_start = r;
    while r <= 1e3 {
        if small(r)? {
            if run == 0 {
                run_start = r;
            }
            run += 1;
            if run >= 8 {
                return Ok(run_start);
            }
        } else {
            run = 0;
        }
        r += step;
    }
    Err(Error::QuadratureNonConvergence {
        integral: "kernel truncation radius",
        value: r,
        error: f64::INFINITY,
    })
}

/// The moments `I_k = ∫_0^∞ r^k sigma_check(r)^2 dr` for `k = 2, 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelMoments {
    pub i2: f64,
    pub i3: f64,
}

impl KernelMoments {
    pub fn of(kernel: &RadialKernel, spec: &QuadratureSpec) -> Result<Self> {
        Ok(KernelMoments {
            i2: kernel.moment(2, spec)?,
            i3: kernel.moment(3, spec)?,
        })
    }
}

/// One-dimensional slice `xi -> sigma(sqrt(t^2 + xi^2))` of a radial symbol.
#[derive(Debug, Clone)]
pub struct Slice1D {
    symbol: RadialSymbol,
    t: f64,
}

impl Slice1D {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn symbol(&self) -> &RadialSymbol {
        &self.symbol
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.symbol.eval(libm::hypot(self.t, xi))
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        let r = libm::hypot(self.t, xi);
        if r == 0.0 {
            return 0.0;
        }
        self.symbol.derivative(r) * xi / r
    }

    /// Half-width of the `xi` interval outside which the slice vanishes.
    pub fn support(&self, spec: &QuadratureSpec) -> f64 {
        let rd = self.symbol.integration_radius(spec);
        if libm::fabs(self.t) >= rd {
            0.0
        } else {
            libm::sqrt(rd * rd - self.t * self.t)
        }
    }

    /// `sigma_check_t(y) = (2 pi)^-1 ∫ sigma_t(xi) e^{i y xi} dxi
    ///                   = pi^-1 ∫_0^∞ sigma_t(xi) cos(y xi) dxi`.
    pub fn kernel(&self, y: f64, spec: &QuadratureSpec) -> Result<f64> {
        let upper = self.support(spec);
        if upper == 0.0 || self.symbol.is_zero() {
            return Ok(0.0);
        }
        let y = libm::fabs(y);
        let max_len = if y > 0.0 {
            (PI / (2.0 * y)).min(0.5)
        } else {
            0.5
        };
        let pts = panels(0.0, upper, max_len);
        let e = integrate_named(
            "slice cosine transform",
            |xi| self.eval(xi) * libm::cos(y * xi),
            &pts,
            spec,
        )?;
        Ok(e.value / PI)
    }
}

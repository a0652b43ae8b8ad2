//! Globally adaptive Gauss-Kronrod (10/21) quadrature.
//!
//! Every 1-D integral in the crate goes through [`integrate`] or
//! [`integrate_breaks`]. Subdivision always bisects the interval with the
//! largest error estimate and ties are broken by position, so the result
//! is a deterministic function of the integrand values.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerances and truncation overrides shared by the integral evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals per adaptive integral.
    pub max_subdivisions: usize,
    /// Overrides the kernel truncation radius when set.
    pub r_max: Option<f64>,
    /// Overrides the symbol truncation radius when set.
    pub symbol_r_max: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
            r_max: None,
            symbol_r_max: None,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Same spec with both tolerances multiplied by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }

    pub fn with_tolerances(&self, abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..*self
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [0, 1] (positive half) for the 21-point rule;
// odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_184,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_gauss = 0.0;
    let mut result_kronrod = fc * WGK[10];
    let mut resabs = libm::fabs(result_kronrod);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        result_kronrod += WGK[j] * sum;
        resabs += WGK[j] * (libm::fabs(f1) + libm::fabs(f2));
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * sum;
        }
    }
    let mean = result_kronrod * 0.5;
    let mut resasc = WGK[10] * libm::fabs(fc - mean);
    for j in 0..10 {
        resasc += WGK[j] * (libm::fabs(fv1[j] - mean) + libm::fabs(fv2[j] - mean));
    }
    let value = result_kronrod * half;
    let resabs = resabs * libm::fabs(half);
    let resasc = resasc * libm::fabs(half);
    let mut error = libm::fabs((result_kronrod - result_gauss) * half);
    if resasc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / resasc, 1.5);
        error = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error < round {
        error = round;
    }
    Segment { a, b, value, error }
}

fn sum_segments(segments: &[Segment]) -> (f64, f64) {
    // Summed in position order so the total does not depend on the
    // refinement history.
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for s in segments {
        let y = s.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        error += s.error;
    }
    (value, error)
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> core::result::Result<Estimate, Estimate> {
    integrate_breaks(f, &[a, b], spec)
}

/// Adaptive integral over `[points[0], points[last]]`, with the listed
/// points used as initial panel boundaries (kinks, oscillation panels).
///
/// Returns `Err` carrying the best estimate when the tolerance
/// `max(abs_tol, rel_tol * |I|)` was not reached within
/// `spec.max_subdivisions` panels.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> core::result::Result<Estimate, Estimate> {
    let mut segments: Vec<Segment> = Vec::with_capacity(points.len().max(2) + 16);
    for w in points.windows(2) {
        if w[1] > w[0] {
            segments.push(gk21(&mut f, w[0], w[1]));
        }
    }
    let mut evaluations = 21 * segments.len();
    if segments.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let budget = spec.max_subdivisions.max(segments.len());
    loop {
        let (value, error) = sum_segments(&segments);
        let tol = spec.abs_tol.max(spec.rel_tol * libm::fabs(value));
        let estimate = Estimate {
            value,
            error,
            evaluations,
        };
        if error <= tol {
            return Ok(estimate);
        }
        if segments.len() >= budget {
            return Err(estimate);
        }
        let mut worst = 0;
        for (i, s) in segments.iter().enumerate() {
            if s.error > segments[worst].error {
                worst = i;
            }
        }
        let s = segments[worst];
        let mid = 0.5 * (s.a + s.b);
        if !(mid > s.a && mid < s.b) {
            // Interval exhausted at machine resolution.
            return Err(estimate);
        }
        let left = gk21(&mut f, s.a, mid);
        let right = gk21(&mut f, mid, s.b);
        evaluations += 42;
        segments[worst] = left;
        segments.insert(worst + 1, right);
    }
}

/// Like [`integrate_breaks`] but converts non-convergence into
/// [`Error::QuadratureNonConvergence`] naming `integral`.
pub fn integrate_named<F: FnMut(f64) -> f64>(
    integral: &'static str,
    f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    integrate_breaks(f, points, spec).map_err(|e| Error::QuadratureNonConvergence {
        integral,
        value: e.value,
        error: e.error,
    })
}

/// Nodes and weights of the composite 21-point Kronrod rule on the panels
/// `points[i]..points[i + 1]`.
pub fn kronrod_nodes(points: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(21 * points.len());
    for w in points.windows(2) {
        let center = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        if half.is_nan() || half <= 0.0 {
            continue;
        }
        for j in 0..10 {
            out.push((center - half * XGK[j], half * WGK[j]));
            out.push((center + half * XGK[j], half * WGK[j]));
        }
        out.push((center, half * WGK[10]));
    }
    out
}

/// Evenly spaced breakpoints from `a` to `b` with spacing at most `max_len`.
pub fn panels(a: f64, b: f64, max_len: f64) -> Vec<f64> {
    let n = if max_len > 0.0 && max_len.is_finite() {
        libm::ceil((b - a) / max_len).max(1.0) as usize
    } else {
        1
    };
    (0..=n)
        .map(|i| {
            if i == n {
                b
            } else {
                a + (b - a) * (i as f64) / (n as f64)
            }
        })
        .collect()
}

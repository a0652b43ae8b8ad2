//! Direct evaluation of `tr h(A_{P_L})` and of the corner constants,
//! independent of the asymptotic formulas.
//!
//! * `tr A_{P_L} = L^2 |P| sigma_check(0)`.
//! * `tr A_{P_L}^2 = ∫ sigma_check(z)^2 g_{P_L}(z) dz` in polar coordinates,
//!   with the exact covariogram `g` and panel breaks at its kinks.
//! * Sector constants by brute-force integration over the sector.
//! * A midpoint-grid Nyström estimator for any polynomial `h`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;

use crate::geometry::{check_corner_angle, ConvexPoly};
use crate::quadrature::{integrate_named, panels, Estimate, QuadratureSpec};
use crate::{Error, Polygon, RadialKernel, Result, TestFunction, Vec2};

/// Largest node count for the grid estimator with `deg h <= 2`.
pub const GRID_NODE_BUDGET: usize = 20_000;

/// Largest node count for the eigendecomposition path (`deg h >= 3`).
pub const GRID_EIGEN_BUDGET: usize = 4_096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TraceMethod {
    Covariogram,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectTraceResult {
    pub value: f64,
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub l: f64,
    pub method: TraceMethod,
    pub err_est: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SectorMethod {
    BruteForce,
    Composed,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectorResult {
    pub gamma: f64,
    pub value: f64,
    pub method: SectorMethod,
}

fn check_scale(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain("scale L must be positive and finite"));
    }
    Ok(())
}

/// `tr A_{P_L} = L^2 |P| sigma_check(0)`.
pub fn trace_a(p: &Polygon, kernel: &RadialKernel, l: f64) -> f64 {
    l * l * p.area() * kernel.eval(0.0)
}

/// `tr A_{P_L}^2 = ∫_0^{r_max} r sigma_check(r)^2 ∫_0^{2 pi} g_{P_L}(r, θ) dθ dr`.
pub fn trace_a2_covariogram(
    p: &Polygon,
    kernel: &RadialKernel,
    l: f64,
    spec: &QuadratureSpec,
) -> Result<DirectTraceResult> {
    check_scale(l)?;
    spec.validate()?;
    let done = |value, err_est| DirectTraceResult {
        value,
        l,
        method: TraceMethod::Covariogram,
        err_est,
    };
    if kernel.is_zero() {
        return Ok(done(0.0, 0.0));
    }
    let pl = p.scale(l)?;
    let segs = pl.covariogram_kink_segments();
    let r_max = pl.diameter().min(kernel.r_max());

    let mut pts: Vec<f64> = pl
        .covariogram_kink_radii(&segs)
        .into_iter()
        .chain(kernel.breaks())
        .chain(panels(0.0, r_max, 1.0))
        .filter(|&r| r >= 0.0 && r <= r_max)
        .collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| libm::fabs(*a - *b) <= 1e-13 * b.max(1.0));

    let inner_spec = inner_tolerances(spec);
    let mut failure = None;
    let mut inner_err = 0.0f64;
    let outer = integrate_named(
        "covariogram trace over r",
        |r| {
            let k = kernel.eval(r);
            if k == 0.0 {
                return 0.0;
            }
            match angular_covariogram(&pl, &segs, r, &inner_spec) {
                Ok(e) => {
                    inner_err = inner_err.max(e.error);
                    r * k * k * e.value
                }
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            }
        },
        &pts,
        spec,
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    let weight = kernel.moment(1, spec)?;
    Ok(done(outer.value, outer.error + inner_err * weight))
}

/// Inner integrals run 100x tighter, floored near rounding level.
fn inner_tolerances(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_tolerances(spec.abs_tol * 1e-2, (spec.rel_tol * 1e-2).max(1e-13))
}

/// `∫_0^{2 pi} g(r cos θ, r sin θ) dθ`, using `g(z) = g(-z)`.
fn angular_covariogram(
    pl: &Polygon,
    segs: &[(Vec2, Vec2)],
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if r == 0.0 {
        return Ok(Estimate {
            value: 2.0 * PI * pl.area(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut pts = Vec::with_capacity(16);
    pts.push(0.0);
    pts.extend(
        pl.covariogram_kink_angles(r, segs)
            .into_iter()
            .filter(|&t| t > 0.0 && t < PI),
    );
    pts.push(PI);
    let e = integrate_named(
        "covariogram trace over angle",
        |t| pl.covariogram(Vec2::from_polar(r, t)),
        &pts,
        spec,
    )?;
    Ok(Estimate {
        value: 2.0 * e.value,
        error: 2.0 * e.error,
        evaluations: e.evaluations,
    })
}

/// `tr h(A_{P_L})` for real `h = a2 z^2 + a1 z` by linearity.
pub fn trace_h_quadratic(
    p: &Polygon,
    kernel: &RadialKernel,
    h: &TestFunction,
    l: f64,
    spec: &QuadratureSpec,
) -> Result<DirectTraceResult> {
    if !h.is_quadratic() {
        return Err(Error::Domain(
            "direct trace needs deg h <= 2; use the grid estimator",
        ));
    }
    if !h.is_real() {
        return Err(Error::Domain(
            "direct trace needs real test function coefficients",
        ));
    }
    check_scale(l)?;
    let a1 = h.coeff(1).re;
    let a2 = h.coeff(2).re;
    let linear = a1 * trace_a(p, kernel, l);
    if a2 == 0.0 {
        return Ok(DirectTraceResult {
            value: linear,
            l,
            method: TraceMethod::Covariogram,
            err_est: 0.0,
        });
    }
    let sq = trace_a2_covariogram(p, kernel, l, spec)?;
    Ok(DirectTraceResult {
        value: a2 * sq.value + linear,
        l,
        method: TraceMethod::Covariogram,
        err_est: libm::fabs(a2) * sq.err_est,
    })
}

/// Convex sector constant by integrating `sigma_check(y)^2 |(y - C) ∩ C|`
/// over the sector `C = {0 <= θ <= gamma}` in polar coordinates. The overlap
/// is the parallelogram spanned by the components of `y` along the two
/// sector edges.
pub fn b0_convex_bruteforce(
    gamma: f64,
    kernel: &RadialKernel,
    spec: &QuadratureSpec,
) -> Result<SectorResult> {
    if !(gamma > 0.0 && gamma < PI) {
        return Err(Error::Domain("convex sector angle must lie in (0, pi)"));
    }
    spec.validate()?;
    let result = |value| SectorResult {
        gamma,
        value,
        method: SectorMethod::BruteForce,
    };
    if kernel.is_zero() {
        return Ok(result(0.0));
    }
    let e1 = Vec2::new(1.0, 0.0);
    let e2 = Vec2::from_polar(1.0, gamma);
    let det = e1.cross(e2);
    let overlap = |y: Vec2| {
        let a = y.cross(e2) / det;
        let b = e1.cross(y) / det;
        libm::fabs(a * b * det)
    };
    let inner_spec = inner_tolerances(spec);
    let mut failure = None;
    let outer = integrate_named(
        "convex sector over r",
        |r| {
            let k = kernel.eval(r);
            if k == 0.0 {
                return 0.0;
            }
            match integrate_named(
                "convex sector over angle",
                |t| overlap(Vec2::from_polar(r, t)),
                &[0.0, gamma],
                &inner_spec,
            ) {
                Ok(e) => r * k * k * e.value,
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            }
        },
        &kernel.breaks(),
        spec,
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(result(outer.value))
}

/// Concave corner constant `-s(2 pi - gamma) + 2 s(gamma - pi)` from
/// convex sector constants `s`.
pub fn b0_concave_composed(
    gamma: f64,
    kernel: &RadialKernel,
    spec: &QuadratureSpec,
) -> Result<SectorResult> {
    if !(gamma > PI && gamma < 2.0 * PI) {
        return Err(Error::Domain("concave sector angle must lie in (pi, 2 pi)"));
    }
    let outer = b0_convex_bruteforce(2.0 * PI - gamma, kernel, spec)?.value;
    let inner = b0_convex_bruteforce(gamma - PI, kernel, spec)?.value;
    Ok(SectorResult {
        gamma,
        value: -outer + 2.0 * inner,
        method: SectorMethod::Composed,
    })
}

/// Brute-force corner constant for any legal angle.
pub fn b0_bruteforce(
    gamma: f64,
    kernel: &RadialKernel,
    spec: &QuadratureSpec,
) -> Result<SectorResult> {
    check_corner_angle(gamma)?;
    if gamma < PI {
        b0_convex_bruteforce(gamma, kernel, spec)
    } else {
        b0_concave_composed(gamma, kernel, spec)
    }
}

/// Midpoint nodes of an `n x n` grid over the bounding box of `p`, each
/// cell clipped by `p`: node at the clipped centroid, weight the clipped
/// area.
pub fn grid_nodes(p: &Polygon, n: usize) -> Vec<(Vec2, f64)> {
    let (lo, hi) = p.bounds();
    let dx = (hi.x - lo.x) / n as f64;
    let dy = (hi.y - lo.y) / n as f64;
    let tris: Vec<_> = p
        .triangles()
        .iter()
        .map(|t| (t.bounds(), ConvexPoly::from_triangle(t)))
        .collect();
    let mut nodes = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let c_lo = Vec2::new(lo.x + i as f64 * dx, lo.y + j as f64 * dy);
            let c_hi = Vec2::new(lo.x + (i + 1) as f64 * dx, lo.y + (j + 1) as f64 * dy);
            let cell = ConvexPoly::rect(c_lo, c_hi);
            let mut area = 0.0;
            let mut moment = Vec2::new(0.0, 0.0);
            for ((t_lo, t_hi), tri) in &tris {
                if t_lo.x >= c_hi.x || t_hi.x <= c_lo.x || t_lo.y >= c_hi.y || t_hi.y <= c_lo.y {
                    continue;
                }
                if let Some((a, c)) = cell.clip_convex(tri.vertices()).centroid() {
                    area += a;
                    moment = moment + c * a;
                }
            }
            if area > 0.0 {
                nodes.push((moment * (1.0 / area), area));
            }
        }
    }
    nodes
}

/// Grid estimate of `tr h(A_{P_L})` at one resolution.
pub fn grid_trace_at(
    p: &Polygon,
    kernel: &RadialKernel,
    h: &TestFunction,
    l: f64,
    n: usize,
) -> Result<f64> {
    check_scale(l)?;
    if n == 0 {
        return Err(Error::Domain("grid resolution must be at least 1"));
    }
    if !h.is_real() {
        return Err(Error::Domain(
            "grid estimator needs real test function coefficients",
        ));
    }
    let degree = h.degree();
    let budget = if degree <= 2 {
        GRID_NODE_BUDGET
    } else {
        GRID_EIGEN_BUDGET
    };
    if n.saturating_mul(n) > budget.saturating_mul(4) {
        // Cheap reject before clipping; the exact count is checked below.
        return Err(Error::BudgetExceeded {
            nodes: n * n,
            budget,
        });
    }
    let pl = p.scale(l)?;
    let nodes = grid_nodes(&pl, n);
    if nodes.len() > budget {
        return Err(Error::BudgetExceeded {
            nodes: nodes.len(),
            budget,
        });
    }
    let k0 = kernel.eval(0.0);
    let mut sums = Vec::with_capacity(degree);
    sums.push(nodes.iter().map(|&(_, w)| w * k0).sum::<f64>());
    if degree == 2 {
        let mut s2 = 0.0;
        for &(xi, wi) in &nodes {
            let mut row = 0.0;
            for &(xj, wj) in &nodes {
                let k = kernel.eval((xi - xj).norm());
                row += wj * k * k;
            }
            s2 += wi * row;
        }
        sums.push(s2);
    } else if degree >= 3 {
        let m = nodes.len();
        let sw: Vec<f64> = nodes.iter().map(|&(_, w)| libm::sqrt(w)).collect();
        let mat = DMatrix::from_fn(m, m, |i, j| {
            sw[i] * sw[j] * kernel.eval((nodes[i].0 - nodes[j].0).norm())
        });
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::EigenFailure);
        }
        // Eigenvalues only; the implicit QR sweep on a finite symmetric matrix converges.
        let lambda = mat.symmetric_eigenvalues();
        if lambda.iter().any(|v| !v.is_finite()) {
            return Err(Error::EigenFailure);
        }
        sums.clear();
        for k in 1..=degree {
            sums.push(lambda.iter().map(|&v| libm::pow(v, k as f64)).sum());
        }
    }
    Ok(h.apply_power_sums(&sums).re)
}

/// Grid estimate at resolution `n`, with error estimated against `n / 2`.
pub fn grid_trace(
    p: &Polygon,
    kernel: &RadialKernel,
    h: &TestFunction,
    l: f64,
    n: usize,
) -> Result<DirectTraceResult> {
    let fine = grid_trace_at(p, kernel, h, l, n)?;
    let err_est = if n >= 2 {
        libm::fabs(fine - grid_trace_at(p, kernel, h, l, n / 2)?)
    } else {
        f64::INFINITY
    };
    Ok(DirectTraceResult {
        value: fine,
        l,
        method: TraceMethod::Grid,
        err_est,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs_radial::{b0_closed, coefficients};
    use crate::{KernelMoments, RadialSymbol};

    fn gauss() -> RadialKernel {
        RadialKernel::from_symbol(
            &RadialSymbol::gaussian(1.0).unwrap(),
            &QuadratureSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn bulk_trace() {
        let k = gauss();
        let sq = Polygon::unit_square();
        assert!((trace_a(&sq, &k, 1.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((trace_a(&sq, &k, 10.0) - 100.0 / (2.0 * PI)).abs() < 1e-13);
        assert_eq!(trace_a(&sq, &RadialKernel::zero(), 3.0), 0.0);
    }

    /// Tensor Gauss-Legendre rule on [-1, 1], nodes from Newton iteration.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for i in 1..=n {
            let mut x = libm::cos(PI * (i as f64 - 0.25) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    }

    #[test]
    fn covariogram_trace_matches_cartesian_quadrature() {
        // ∫ sigma_check(z)^2 (1-|z1|)_+ (1-|z2|)_+ dz on [0,1]^2 pieces.
        let rule = gauss_legendre(40);
        let mut one_d = 0.0;
        for &(x, w) in &rule {
            let u = 0.5 * (x + 1.0);
            one_d += 0.5 * w * libm::exp(-u * u) * (1.0 - u);
        }
        let cartesian = 4.0 * one_d * one_d / (4.0 * PI * PI);
        let erf_form =
            (libm::sqrt(PI) * libm::erf(1.0) - (1.0 - libm::exp(-1.0))).powi(2) / (4.0 * PI * PI);
        assert!((cartesian - erf_form).abs() < 1e-14);

        let sq = Polygon::unit_square();
        let got = trace_a2_covariogram(&sq, &gauss(), 1.0, &QuadratureSpec::default()).unwrap();
        assert!(
            (got.value - cartesian).abs() < 1e-9,
            "{} vs {cartesian}",
            got.value
        );
        assert!(got.err_est < 1e-9);
    }

    #[test]
    fn covariogram_trace_rotation_invariant() {
        let spec = QuadratureSpec::default();
        let l = Polygon::l_shape();
        let moved = l.rigid_motion(0.7, Vec2::new(3.0, -2.0));
        let a = trace_a2_covariogram(&l, &gauss(), 2.0, &spec)
            .unwrap()
            .value;
        let b = trace_a2_covariogram(&moved, &gauss(), 2.0, &spec)
            .unwrap()
            .value;
        assert!((a - b).abs() < 1e-9 * a);
        let z = trace_a2_covariogram(&l, &RadialKernel::zero(), 2.0, &spec).unwrap();
        assert_eq!(z.value, 0.0);
        assert!(trace_a2_covariogram(&l, &gauss(), 0.0, &spec).is_err());
    }

    #[test]
    fn quadratic_linearity() {
        let spec = QuadratureSpec::default();
        let sq = Polygon::unit_square();
        let k = gauss();
        let t2 = trace_a2_covariogram(&sq, &k, 3.0, &spec).unwrap().value;
        let t1 = trace_a(&sq, &k, 3.0);
        let h = TestFunction::from_real(&[-1.0, 1.0]).unwrap();
        let v = trace_h_quadratic(&sq, &k, &h, 3.0, &spec).unwrap().value;
        assert!((v - (t2 - t1)).abs() < 1e-14 * t2, "{v} {t2} {t1}");
        let lin = trace_h_quadratic(&sq, &k, &TestFunction::monomial(1), 3.0, &spec).unwrap();
        assert_eq!(lin.value, t1);
        assert!(trace_h_quadratic(&sq, &k, &TestFunction::monomial(3), 3.0, &spec).is_err());
    }

    #[test]
    fn residual_against_expansion_shrinks() {
        let spec = QuadratureSpec::default().tightened(1e-3);
        let sq = Polygon::unit_square();
        let sym = RadialSymbol::gaussian(1.0).unwrap();
        let c = coefficients(&sq, &TestFunction::monomial(2), &sym, &spec).unwrap();
        let k = gauss();
        let r = |l: f64| {
            (trace_a2_covariogram(&sq, &k, l, &spec).unwrap().value - c.asymptotic_trace(l).re)
                .abs()
        };
        // At L = 1 the remainder is still of order 4e-3.
        assert!(r(1.0) < 5e-3);
        assert!(r(6.0) < 1e-9);
    }

    #[test]
    fn sector_two_paths() {
        let spec = QuadratureSpec::default();
        let k = gauss();
        let m = KernelMoments::of(&k, &spec).unwrap();
        for j in 1..6 {
            let g = j as f64 * PI / 6.0;
            let b = b0_convex_bruteforce(g, &k, &spec).unwrap();
            assert_eq!(b.method, SectorMethod::BruteForce);
            assert!((b.value - b0_closed(g, &m).unwrap()).abs() < 1e-9);
        }
        for j in [7.0, 8.0, 9.0, 10.0] {
            let g = j * PI / 6.0;
            let b = b0_concave_composed(g, &k, &spec).unwrap();
            assert!((b.value - b0_closed(g, &m).unwrap()).abs() < 1e-9);
        }
        let quarter = b0_convex_bruteforce(PI / 2.0, &k, &spec).unwrap().value;
        assert!((quarter - 1.0 / (16.0 * PI * PI)).abs() < 1e-12);
        let third = b0_convex_bruteforce(PI / 3.0, &k, &spec).unwrap().value;
        assert!((third - 0.002_503_90).abs() < 1e-8);
        let two_thirds = b0_convex_bruteforce(2.0 * PI / 3.0, &k, &spec)
            .unwrap()
            .value;
        let want = (1.0 + 2.0 * PI / (3.0 * libm::sqrt(3.0))) / 2.0 / (8.0 * PI * PI);
        assert!((two_thirds - want).abs() < 1e-12);
        assert!(b0_bruteforce(PI, &k, &spec).is_err());
        assert!(b0_convex_bruteforce(4.0, &k, &spec).is_err());
        assert!(b0_concave_composed(1.0, &k, &spec).is_err());
    }

    #[test]
    fn grid_nodes_cover_polygon() {
        let l = Polygon::l_shape().scale(1.3).unwrap();
        let nodes = grid_nodes(&l, 17);
        let area: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((area - l.area()).abs() < 1e-12 * l.area());
        assert!(nodes.iter().all(|n| l.contains(n.0)));
    }

    #[test]
    fn grid_linear_and_quadratic() {
        let spec = QuadratureSpec::default();
        let sq = Polygon::unit_square();
        let k = gauss();
        let lin = grid_trace(&sq, &k, &TestFunction::monomial(1), 4.0, 32).unwrap();
        assert!((lin.value - trace_a(&sq, &k, 4.0)).abs() < 1e-12);
        let exact = trace_a2_covariogram(&sq, &k, 4.0, &spec).unwrap().value;
        let g = grid_trace(&sq, &k, &TestFunction::monomial(2), 4.0, 64).unwrap();
        assert!((g.value - exact).abs() < 0.01 * exact);
        assert_eq!(g.method, TraceMethod::Grid);
        // Error decreases as resolution doubles.
        let e16 =
            (grid_trace_at(&sq, &k, &TestFunction::monomial(2), 4.0, 16).unwrap() - exact).abs();
        let e32 =
            (grid_trace_at(&sq, &k, &TestFunction::monomial(2), 4.0, 32).unwrap() - exact).abs();
        assert!(e32 < 0.5 * e16, "{e16} {e32}");
    }

    #[test]
    fn grid_eigen_path_matches_power_sums() {
        let sq = Polygon::unit_square();
        let k = gauss();
        // z^3 - z^3 + z^2 through the eigen path equals the direct sum.
        let two = grid_trace_at(&sq, &k, &TestFunction::monomial(2), 3.0, 12).unwrap();
        let h = TestFunction::from_real(&[0.0, 1.0, 1e-300]).unwrap();
        let via_eig = grid_trace_at(&sq, &k, &h, 3.0, 12).unwrap();
        assert!((two - via_eig).abs() < 1e-10 * two);
        assert!(matches!(
            grid_trace_at(&sq, &k, &TestFunction::monomial(3), 3.0, 200),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}

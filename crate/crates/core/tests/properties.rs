//! Property suites for the geometry invariants and the constant-coefficient
//! decomposition on random polygons.

use std::f64::consts::PI;

use num_complex::Complex64;
use polytrace_core::coeffs_radial::{c0_radial, coefficients_with_kernel};
use polytrace_core::geometry::{angle_function_f, intersect_triangles, F_SERIES_WINDOW};
use polytrace_core::{
    Error, KernelMoments, Polygon, QuadratureSpec, RadialKernel, RadialSymbol, TestFunction, Vec2,
    VertexKind,
};
use proptest::prelude::*;

/// Star-shaped polygon about the origin from sorted angles and radii.
fn star_polygon(angles: &[f64], radii: &[f64]) -> Result<Polygon, Error> {
    let pts: Vec<Vec2> = angles
        .iter()
        .zip(radii)
        .map(|(&t, &r)| Vec2::from_polar(r, t))
        .collect();
    Polygon::new(vec![pts])
}

fn star() -> impl Strategy<Value = Polygon> {
    (5usize..=10)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0.0..1.0f64, n),
                proptest::collection::vec(0.3..1.0f64, n),
            )
        })
        .prop_filter_map("degenerate star", |(gaps, radii)| {
            // Angles with every gap at least a fifth of the mean.
            let n = gaps.len();
            let w: Vec<f64> = gaps.iter().map(|g| 0.2 + g).collect();
            let total: f64 = w.iter().sum();
            let mut t = 0.0;
            let angles: Vec<f64> = w
                .iter()
                .map(|wi| {
                    let a = t;
                    t += 2.0 * PI * wi / total;
                    a
                })
                .collect();
            debug_assert_eq!(angles.len(), n);
            star_polygon(&angles, &radii).ok()
        })
}

fn translation() -> impl Strategy<Value = Vec2> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn gaussian_kernel() -> (RadialSymbol, RadialKernel, KernelMoments) {
    let spec = QuadratureSpec::default();
    let s = RadialSymbol::gaussian(1.0).unwrap();
    let k = RadialKernel::from_symbol(&s, &spec).unwrap();
    let m = KernelMoments::of(&k, &spec).unwrap();
    (s, k, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covariogram_symmetric_bounded_supported(p in star(), z in translation()) {
        let g = p.covariogram(z);
        let area = p.area();
        prop_assert!(g >= 0.0 && g <= area);
        prop_assert!((g - p.covariogram(-z)).abs() <= 1e-12 * area);
        prop_assert!((p.covariogram(Vec2::new(0.0, 0.0)) - area).abs() <= 1e-12 * area);
        let far = z * ((p.diameter() * 1.001) / z.norm().max(1e-9));
        prop_assert_eq!(p.covariogram(far), 0.0);
    }

    #[test]
    fn covariogram_peaks_at_origin(p in star(), theta in 0.0..PI) {
        let dir = Vec2::from_polar(1.0, theta);
        for k in 1..10 {
            let t = p.diameter() * k as f64 / 10.0;
            prop_assert!(p.covariogram(dir * t) <= p.area() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn triangulation_partitions_polygon(p in star()) {
        let tris = p.triangles();
        prop_assert_eq!(tris.len(), p.vertex_count() - 2);
        let total: f64 = tris.iter().map(|t| t.area()).sum();
        prop_assert!((total - p.area()).abs() <= 1e-12 * p.area());
        for (i, a) in tris.iter().enumerate() {
            prop_assert!(a.area() > 0.0);
            let [u, v, w] = a.vertices;
            let c = (u + v + w) * (1.0 / 3.0);
            prop_assert!(p.contains(c));
            for b in &tris[i + 1..] {
                prop_assert!(intersect_triangles(a, b).area() <= 1e-12 * p.area());
            }
        }
    }

    #[test]
    fn interior_angles_sum(p in star()) {
        let n = p.vertex_count() as f64;
        let sum: f64 = p.corners().iter().map(|c| c.angle).sum();
        prop_assert!((sum - (n - 2.0) * PI).abs() < 1e-10);
        for c in p.corners() {
            prop_assert_eq!(c.kind == VertexKind::Convex, c.angle < PI);
        }
    }

    #[test]
    fn parallelogram_edges_have_zero_f(a in 0.3..3.0f64, b in 0.3..3.0f64, skew in -2.0..2.0f64, theta in 0.0..6.0f64) {
        let p = Polygon::from_coords(&[vec![[0.0, 0.0], [a, 0.0], [a + skew, b], [skew, b]]])
            .unwrap()
            .rigid_motion(theta, Vec2::new(1.0, -2.0));
        for i in 0..4 {
            prop_assert!(p.edge_f(i).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn f_series_guard_agrees(eps in -F_SERIES_WINDOW..F_SERIES_WINDOW) {
        prop_assume!(eps != 0.0);
        let gamma = PI + eps;
        // cot(pi + e) = cot(e); evaluate at the represented offset to avoid cancellation.
        let e = gamma - PI;
        let closed = 1.0 - e * (e.cos() / e.sin());
        prop_assert!((angle_function_f(gamma).unwrap() - closed).abs() < 1e-12);
    }

    #[test]
    fn f_positive_away_from_pi(gamma in 1e-3..(2.0 * PI - 1e-3)) {
        prop_assume!((gamma - PI).abs() >= F_SERIES_WINDOW);
        prop_assert!(angle_function_f(gamma).unwrap() > 0.0);
    }

    #[test]
    fn rigid_motion_invariance(p in star(), theta in 0.0..6.3f64, z in translation()) {
        let q = p.rigid_motion(theta, z);
        prop_assert!((p.area() - q.area()).abs() < 1e-12);
        prop_assert!((p.perimeter() - q.perimeter()).abs() < 1e-12);
        let w = Vec2::new(0.3, -0.2);
        let rotated = Vec2::new(theta.cos() * w.x - theta.sin() * w.y, theta.sin() * w.x + theta.cos() * w.y);
        prop_assert!((p.covariogram(w) - q.covariogram(rotated)).abs() < 1e-11);
        let (_, _, m) = gaussian_kernel();
        prop_assert!((c0_radial(&p, &m) - c0_radial(&q, &m)).abs() < 1e-13);
    }

    #[test]
    fn scaling_law(p in star(), s in 0.2..5.0f64, z in translation()) {
        let q = p.scale(s).unwrap();
        prop_assert!((q.area() - s * s * p.area()).abs() < 1e-12 * q.area());
        prop_assert!((q.perimeter() - s * p.perimeter()).abs() < 1e-12 * q.perimeter());
        prop_assert!((q.covariogram(z * s) - s * s * p.covariogram(z)).abs() < 1e-11 * q.area());
        let (_, _, m) = gaussian_kernel();
        prop_assert!((c0_radial(&p, &m) - c0_radial(&q, &m)).abs() < 1e-13);
    }

    #[test]
    fn c0_breakdown_matches_angle_sum(p in star()) {
        prop_assume!(p.corners().iter().any(|c| c.kind == VertexKind::Concave));
        let (s, k, m) = gaussian_kernel();
        let set = coefficients_with_kernel(&p, &TestFunction::monomial(2), &s, &k, &QuadratureSpec::default()).unwrap();
        let want = c0_radial(&p, &m);
        prop_assert!((set.c0_from_breakdown() - Complex64::new(want, 0.0)).norm() < 1e-10);
        prop_assert!(set.c0.re > 0.0);
    }
}

//! Acceptance criteria A1-A8, one PASS/FAIL line each. A8 only warns.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use polytrace_core::coeffs_general::{a0_via_halfline, a1_pv, a1_via_halfline, PvSpec};
use polytrace_core::coeffs_radial::{
    b0_closed, c0_radial, c2_radial, coefficients_with_kernel, SMOOTH_BASELINE,
};
use polytrace_core::geometry::{angle_function_f, intersect_triangles, F_SERIES_WINDOW};
use polytrace_core::oracle::{
    b0_concave_composed, b0_convex_bruteforce, grid_trace_at, trace_a, trace_a2_covariogram,
};
use polytrace_core::{
    KernelMoments, Polygon, QuadratureSpec, RadialKernel, RadialSymbol, TestFunction, Vec2,
    VertexKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
/// Name, check, and whether a failure is blocking.
type Criterion = (&'static str, fn() -> Outcome, bool);

struct Kernel {
    sigma: RadialSymbol,
    kernel: RadialKernel,
    m: KernelMoments,
}

fn kernel(sigma: RadialSymbol) -> Kernel {
    let spec = QuadratureSpec::default();
    let kernel = RadialKernel::from_symbol(&sigma, &spec).expect("kernel");
    let m = KernelMoments::of(&kernel, &spec).expect("moments");
    Kernel { sigma, kernel, m }
}

fn gaussian(width: f64) -> Kernel {
    kernel(RadialSymbol::gaussian(width).unwrap())
}

fn fermi() -> Kernel {
    kernel(RadialSymbol::fermi(1.0, 1.0).unwrap())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn a1() -> Outcome {
    let g = gaussian(1.0);
    let spec = QuadratureSpec::default().tightened(1e-3);
    let (c2, c1, c0) = (
        1.0 / (4.0 * PI),
        -PI.sqrt() / (2.0 * PI * PI),
        1.0 / (4.0 * PI * PI),
    );
    let p = Polygon::unit_square();
    let mut prev: Option<(f64, f64)> = None;
    let mut last = f64::NAN;
    for l in [2.0, 4.0, 6.0, 8.0, 10.0] {
        let d = trace_a2_covariogram(&p, &g.kernel, l, &spec).map_err(|e| e.to_string())?;
        let r = (d.value - (l * l * c2 + l * c1 + c0)).abs();
        if let Some((rp, ep)) = prev {
            if r > rp + ep + d.err_est {
                return Err(format!("residual grew at L={l}: {r:.3e} > {rp:.3e}"));
            }
        }
        prev = Some((r, d.err_est));
        last = r;
    }
    check(last <= 1e-8, format!("r(10) = {last:.3e}"))
}

fn a2() -> Outcome {
    let g = gaussian(1.0);
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for k in [1.0, 2.0, 3.0, 4.0, 5.0] {
        let gamma = k * PI / 6.0;
        let v = b0_convex_bruteforce(gamma, &g.kernel, &spec)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max((v - b0_closed(gamma, &g.m).unwrap()).abs());
    }
    for gamma in [
        7.0 * PI / 6.0,
        4.0 * PI / 3.0,
        3.0 * PI / 2.0,
        5.0 * PI / 3.0,
    ] {
        let v = b0_concave_composed(gamma, &g.kernel, &spec)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max((v - b0_closed(gamma, &g.m).unwrap()).abs());
    }
    check(
        worst <= 1e-9,
        format!("max |direct - closed| = {worst:.3e}"),
    )
}

fn a3() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, k) in [("gaussian", gaussian(1.0)), ("fermi", fermi())] {
        let want1 = -2.0 * k.m.i2;
        let want0 = -0.25 * PI * k.m.i3;
        let hl = (a1_via_halfline(&k.sigma, &spec).map_err(|e| e.to_string())? - want1).abs();
        let pv = (a1_pv(
            &k.sigma,
            &TestFunction::monomial(2),
            &PvSpec::default(),
            &spec,
        )
        .map_err(|e| e.to_string())?
        .value
            - want1)
            .abs();
        let a0 = (a0_via_halfline(&k.sigma, &spec).map_err(|e| e.to_string())? - want0).abs();
        ok &= hl <= 1e-7 && pv <= 1e-5 && a0 <= 1e-7;
        notes.push(format!("{name}: a1 {hl:.1e}, pv {pv:.1e}, a0 {a0:.1e}"));
    }
    check(ok, notes.join("; "))
}

/// Star polygon with `n` vertices and at least one reflex corner.
fn random_polygon(rng: &mut ChaCha8Rng) -> Polygon {
    loop {
        let n = rng.gen_range(5..=10);
        let w: Vec<f64> = (0..n).map(|_| 0.2 + rng.gen::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let mut t = rng.gen::<f64>() * 2.0 * PI;
        let pts: Vec<Vec2> = w
            .iter()
            .map(|wi| {
                let v = Vec2::from_polar(rng.gen_range(0.3..1.0), t);
                t += 2.0 * PI * wi / total;
                v
            })
            .collect();
        if let Ok(p) = Polygon::new(vec![pts]) {
            let kinds = p.corners().iter().map(|c| c.kind).collect::<Vec<_>>();
            if kinds.contains(&VertexKind::Concave) && kinds.contains(&VertexKind::Convex) {
                return p;
            }
        }
    }
}

fn a4() -> Outcome {
    let g = gaussian(1.0);
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_polygon(&mut rng);
        let set =
            coefficients_with_kernel(&p, &TestFunction::monomial(2), &g.sigma, &g.kernel, &spec)
                .map_err(|e| e.to_string())?;
        let d = (set.c0_from_breakdown() - Complex64::new(c0_radial(&p, &g.m), 0.0)).norm();
        worst = worst.max(d);
    }
    check(
        worst <= 1e-10,
        format!("20 polygons, max deviation {worst:.3e}"),
    )
}

fn a5() -> Outcome {
    let mut polygons = vec![
        Polygon::unit_square(),
        Polygon::l_shape(),
        Polygon::equilateral_triangle(),
        Polygon::rectangle(2.0, 0.5).unwrap(),
    ];
    for n in [3, 5, 6, 12, 48, 100] {
        polygons.push(Polygon::regular(n, 1.0).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    polygons.extend((0..5).map(|_| random_polygon(&mut rng)));
    for k in [gaussian(1.0), gaussian(0.5), fermi()] {
        for p in &polygons {
            let c0 = c0_radial(p, &k.m);
            if c0.is_nan() || c0 <= 0.0 {
                return Err(format!(
                    "c0 = {c0:e} for a polygon with {} vertices",
                    p.vertex_count()
                ));
            }
        }
    }
    let g = gaussian(1.0);
    let n_c0 = 100.0 * c0_radial(&Polygon::regular(100, 1.0).unwrap(), &g.m);
    let rel = (n_c0 * 12.0 - 1.0).abs();
    check(
        rel <= 0.01 && SMOOTH_BASELINE.b0 == 0.0,
        format!(
            "100 c0(100-gon) = {n_c0:.6}, relative offset from 1/12 {rel:.2e}, baseline {}",
            SMOOTH_BASELINE.b0
        ),
    )
}

fn a6() -> Outcome {
    let g = gaussian(1.0);
    let h = TestFunction::monomial(1);
    let mut worst = 0.0f64;
    for (p, l) in [
        (Polygon::unit_square(), 4.0),
        (Polygon::l_shape(), 2.0),
        (Polygon::regular(6, 1.0).unwrap(), 3.0),
    ] {
        let exact = trace_a(&p, &g.kernel, l);
        let closed = l * l * p.area() * g.kernel.eval(0.0);
        if exact != closed {
            return Err("trace_a differs from the closed form".into());
        }
        let grid = grid_trace_at(&p, &g.kernel, &h, l, 128).map_err(|e| e.to_string())?;
        worst = worst.max((grid - exact).abs() / exact);
    }
    check(
        worst <= 1e-12,
        format!("grid 128^2 relative deviation {worst:.2e}"),
    )
}

fn a7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..50 {
        let p = random_polygon(&mut rng);
        let area = p.area();
        let z = Vec2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let g = p.covariogram(z);
        if !(0.0..=area).contains(&g) || (g - p.covariogram(-z)).abs() > 1e-12 * area {
            return Err(format!("covariogram symmetry or bounds, sample {i}"));
        }
        let far = z * (1.001 * p.diameter() / z.norm());
        if p.covariogram(far) != 0.0 {
            return Err(format!("covariogram support, sample {i}"));
        }
        let tris = p.triangles();
        let total: f64 = tris.iter().map(|t| t.area()).sum();
        let overlap = tris
            .iter()
            .enumerate()
            .flat_map(|(j, a)| {
                tris[j + 1..]
                    .iter()
                    .map(move |b| intersect_triangles(a, b).area())
            })
            .fold(0.0, f64::max);
        if (total - area).abs() > 1e-12 * area || overlap > 1e-12 * area {
            return Err(format!("triangulation partition, sample {i}"));
        }
        let sum: f64 = p.corners().iter().map(|c| c.angle).sum();
        if (sum - (p.vertex_count() as f64 - 2.0) * PI).abs() > 1e-10 {
            return Err(format!("angle sum, sample {i}"));
        }
        let (a, b, s) = (
            rng.gen_range(0.3..3.0),
            rng.gen_range(0.3..3.0),
            rng.gen_range(-2.0..2.0),
        );
        let par = Polygon::from_coords(&[vec![[0.0, 0.0], [a, 0.0], [a + s, b], [s, b]]]).unwrap();
        if (0..4).any(|e| par.edge_f(e).unwrap().abs() > 1e-12) {
            return Err(format!("parallelogram F(E), sample {i}"));
        }
        let e = PI + rng.gen_range(-F_SERIES_WINDOW..F_SERIES_WINDOW) - PI;
        if e != 0.0
            && (angle_function_f(PI + e).unwrap() - (1.0 - e * e.cos() / e.sin())).abs() > 1e-12
        {
            return Err(format!("f series, sample {i}"));
        }
    }
    Ok("50 random polygons".into())
}

/// Grid traces of `z^3` at L = 6, 8 against the edge slope from the PV route.
fn a8() -> Outcome {
    let spec = QuadratureSpec::default();
    let h = TestFunction::monomial(3);
    let p = Polygon::unit_square();
    let rel: Vec<Result<(f64, f64), String>> = [0.8, 0.9, 1.0]
        .par_iter()
        .map(|&w| {
            let k = gaussian(w);
            let c2 = c2_radial(&p, &h, &k.sigma, &spec)
                .map_err(|e| e.to_string())?
                .re;
            let trace = |l: f64| -> Result<f64, String> {
                let n = (3.0 * w * l).round() as usize;
                let coarse = grid_trace_at(&p, &k.kernel, &h, l, n).map_err(|e| e.to_string())?;
                let fine = grid_trace_at(&p, &k.kernel, &h, l, 2 * n).map_err(|e| e.to_string())?;
                Ok((4.0 * fine - coarse) / 3.0)
            };
            let slope = ((trace(8.0)? - 64.0 * c2) - (trace(6.0)? - 36.0 * c2)) / 2.0;
            let predicted = p.perimeter()
                * a1_pv(&k.sigma, &h, &PvSpec::default(), &spec)
                    .map_err(|e| e.to_string())?
                    .value;
            Ok((w, (slope / predicted - 1.0).abs()))
        })
        .collect();
    let rel = rel.into_iter().collect::<Result<Vec<_>, _>>()?;
    let ok = rel.iter().all(|&(_, r)| r <= 0.05);
    let notes: Vec<String> = rel.iter().map(|(w, r)| format!("w={w}: {r:.1e}")).collect();
    check(
        ok,
        format!("slope vs prediction, relative: {}", notes.join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A1", a1, true),
        ("A2", a2, true),
        ("A3", a3, true),
        ("A4", a4, true),
        ("A5", a5, true),
        ("A6", a6, true),
        ("A7", a7, true),
        ("A8", a8, false),
    ];
    let mut failed = false;
    for (name, run, blocking) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("{name} PASS {d} ({secs:.1}s)"),
            Err(d) if blocking => {
                failed = true;
                println!("{name} FAIL {d} ({secs:.1}s)");
            }
            Err(d) => println!("{name} FAIL (warn only) {d} ({secs:.1}s)"),
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

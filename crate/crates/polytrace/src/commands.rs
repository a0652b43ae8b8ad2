//! The five subcommands. Each returns the rendered output and an exit
//! status; writing files and printing happen in the binary.

use num_complex::Complex64;
use polytrace_core::coeffs_general::{a1_pv, PvSpec};
use polytrace_core::coeffs_radial::{
    b0_closed, c2_radial, coefficients_with_kernel, CoefficientSet, SMOOTH_BASELINE,
};
use polytrace_core::geometry::check_corner_angle;
use polytrace_core::oracle::{b0_bruteforce, grid_trace, trace_h_quadratic, DirectTraceResult};
use polytrace_core::symbols::KernelProvenance;
use polytrace_core::{
    KernelMoments, Polygon, QuadratureSpec, RadialKernel, RadialSymbol, TestFunction,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{load_polygon, parse_angles, parse_h, parse_list, parse_scales, parse_symbol};
use crate::output::{json, num, Format, Table};
use crate::{CliError, ExitStatus};

pub const DEFAULT_VERIFY_TOL: f64 = 1e-8;
pub const DEFAULT_SECTOR_TOL: f64 = 1e-9;
pub const DEFAULT_GAMMAS: &str = "pi/6,pi/3,pi/2,2pi/3,5pi/6,7pi/6,4pi/3,3pi/2,5pi/3";
pub const DEFAULT_NGONS: &str = "3,6,12,24,48,96";

/// Parsed-on-demand settings shared by the subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub polygon: String,
    pub symbol: String,
    pub h: String,
    pub scales: String,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub grid: Option<usize>,
    pub gammas: String,
    pub ngons: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            polygon: "square".into(),
            symbol: "gaussian:width=1".into(),
            h: "0,1".into(),
            scales: "2,4,6,8,10".into(),
            tol: None,
            format: None,
            grid: None,
            gammas: DEFAULT_GAMMAS.into(),
            ngons: DEFAULT_NGONS.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub status: ExitStatus,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        CommandOutput {
            body,
            status: ExitStatus::Ok,
            warnings: Vec::new(),
        }
    }
}

fn tolerance(cfg: &RunConfig, default: f64) -> Result<f64, CliError> {
    match cfg.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(CliError::config("--tol must be positive")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn kernel_of(sigma: &RadialSymbol, spec: &QuadratureSpec) -> Result<RadialKernel, CliError> {
    Ok(RadialKernel::from_symbol(sigma, spec)?)
}

#[derive(Serialize)]
struct CoeffsReport<'a> {
    polygon_area: f64,
    polygon_perimeter: f64,
    kernel: KernelProvenance,
    #[serde(flatten)]
    set: &'a CoefficientSet,
}

fn complex_fields(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// `L^2 c2 + L c1 + c0` with per-edge and per-corner breakdowns.
pub fn cmd_coeffs(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let p = load_polygon(&cfg.polygon)?;
    let sigma = parse_symbol(&cfg.symbol)?;
    let h = parse_h(&cfg.h)?;
    let spec = QuadratureSpec::default();
    let kernel = kernel_of(&sigma, &spec)?;
    let set = coefficients_with_kernel(&p, &h, &sigma, &kernel, &spec)?;
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&CoeffsReport {
            polygon_area: p.area(),
            polygon_perimeter: p.perimeter(),
            kernel: kernel.provenance(),
            set: &set,
        })?,
        Format::Csv => {
            let mut t = Table::new(&["c2_re", "c2_im", "c1_re", "c1_im", "c0_re", "c0_im"]);
            let mut row = Vec::new();
            for z in [set.c2, set.c1, set.c0] {
                row.extend(complex_fields(z));
            }
            t.row(&row);
            t.into_string()
        }
    };
    Ok(CommandOutput::ok(body))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyRow {
    #[serde(rename = "L")]
    pub l: f64,
    pub direct: f64,
    pub asymptotic: f64,
    pub residual: f64,
    pub err_est: f64,
    pub method: polytrace_core::oracle::TraceMethod,
}

/// Residuals `r(L)` pass when the last is at most `tol` and the sequence
/// does not increase by more than the combined error estimates.
pub fn residuals_pass(rows: &[VerifyRow], tol: f64) -> bool {
    let Some(last) = rows.last() else {
        return false;
    };
    let monotone = rows
        .windows(2)
        .all(|w| w[1].residual <= w[0].residual + w[0].err_est + w[1].err_est);
    monotone && last.residual <= tol
}

/// Direct trace against the three-term expansion over a list of `L`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let p = load_polygon(&cfg.polygon)?;
    let sigma = parse_symbol(&cfg.symbol)?;
    let h = parse_h(&cfg.h)?;
    if !h.is_real() {
        return Err(CliError::config(
            "verify needs real test function coefficients",
        ));
    }
    let mut scales = parse_scales(&cfg.scales)?;
    scales.sort_by(|a, b| a.total_cmp(b));
    let tol = tolerance(cfg, DEFAULT_VERIFY_TOL)?;
    if cfg.grid == Some(0) {
        return Err(CliError::config("--grid must be at least 1"));
    }
    if !h.is_quadratic() && cfg.grid.is_none() {
        return Err(CliError::config(
            "deg h >= 3 has no exact direct trace; pass --grid <n>",
        ));
    }
    let spec = QuadratureSpec::default().tightened(1e-3);
    let kernel = kernel_of(&sigma, &spec)?;
    let mut warnings = Vec::new();

    // Asymptotic side. For deg h >= 3 only c2 and c1 are available.
    let (c2, c1, c0) = if h.is_quadratic() {
        let set = coefficients_with_kernel(&p, &h, &sigma, &kernel, &spec)?;
        (set.c2.re, set.c1.re, set.c0.re)
    } else {
        warnings.push("deg h >= 3: asymptotic column omits c0, so residuals include the constant term; not judged".into());
        let c2 = c2_radial(&p, &h, &sigma, &spec)?.re;
        let a1 = a1_pv(&sigma, &h, &PvSpec::default(), &QuadratureSpec::default())?;
        (c2, p.perimeter() * a1.value, 0.0)
    };

    let direct: Vec<Result<DirectTraceResult, CliError>> = scales
        .par_iter()
        .map(|&l| match cfg.grid {
            Some(n) => grid_trace(&p, &kernel, &h, l, n).map_err(CliError::from),
            None => trace_h_quadratic(&p, &kernel, &h, l, &spec).map_err(CliError::from),
        })
        .collect();
    let mut rows = Vec::with_capacity(scales.len());
    for (l, d) in scales.iter().zip(direct) {
        let d = d?;
        let asymptotic = c2 * l * l + c1 * l + c0;
        rows.push(VerifyRow {
            l: *l,
            direct: d.value,
            asymptotic,
            residual: (d.value - asymptotic).abs(),
            err_est: d.err_est,
            method: d.method,
        });
    }

    let judged = h.is_quadratic();
    if rows.len() == 1 {
        warnings.push("single L value: monotonicity check skipped".into());
    }
    let pass = !judged || residuals_pass(&rows, tol);

    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["L", "direct", "asymptotic", "residual", "err_est", "method"]);
            for r in &rows {
                let method = match r.method {
                    polytrace_core::oracle::TraceMethod::Covariogram => "covariogram",
                    polytrace_core::oracle::TraceMethod::Grid => "grid",
                };
                t.row(&[
                    num(r.l),
                    num(r.direct),
                    num(r.asymptotic),
                    num(r.residual),
                    num(r.err_est),
                    method.into(),
                ]);
            }
            t.into_string()
        }
        Format::Json => json(&rows)?,
    };
    Ok(CommandOutput {
        body,
        status: if pass {
            ExitStatus::Ok
        } else {
            ExitStatus::VerificationFailed
        },
        warnings,
    })
}

/// `c0` of inscribed regular `n`-gons against the smooth-boundary value 0.
pub fn cmd_anomaly(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let sigma = parse_symbol(&cfg.symbol)?;
    let h = parse_h(&cfg.h)?;
    if !h.is_real() {
        return Err(CliError::config(
            "anomaly needs real test function coefficients",
        ));
    }
    let ns: Vec<usize> = parse_list(&cfg.ngons, "n")?
        .into_iter()
        .map(|n| {
            if n.fract() == 0.0 && n >= 3.0 {
                Ok(n as usize)
            } else {
                Err(CliError::config("n-gon sizes must be integers >= 3"))
            }
        })
        .collect::<Result<_, _>>()?;
    let spec = QuadratureSpec::default();
    let kernel = kernel_of(&sigma, &spec)?;
    let values: Vec<Result<f64, CliError>> = ns
        .par_iter()
        .map(|&n| {
            let p = Polygon::regular(n, 1.0)?;
            Ok(coefficients_with_kernel(&p, &h, &sigma, &kernel, &spec)?
                .c0
                .re)
        })
        .collect();
    let values: Vec<f64> = values.into_iter().collect::<Result<_, _>>()?;

    let positive_expected = !sigma.is_zero() && h.coeff(2).re > 0.0;
    let violated = positive_expected && values.iter().any(|&c| c <= 0.0);

    #[derive(Serialize)]
    struct Row {
        kind: &'static str,
        n: Option<usize>,
        c0: f64,
        n_c0: Option<f64>,
    }
    let mut rows: Vec<Row> = ns
        .iter()
        .zip(&values)
        .map(|(&n, &c0)| Row {
            kind: "ngon",
            n: Some(n),
            c0,
            n_c0: Some(n as f64 * c0),
        })
        .collect();
    rows.push(Row {
        kind: "smooth-baseline-analytic",
        n: None,
        c0: SMOOTH_BASELINE.b0,
        n_c0: None,
    });
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["kind", "n", "c0", "n_c0"]);
            for r in &rows {
                t.row(&[
                    r.kind.into(),
                    r.n.map(|n| n.to_string()).unwrap_or_default(),
                    num(r.c0),
                    r.n_c0.map(num).unwrap_or_default(),
                ]);
            }
            t.into_string()
        }
        Format::Json => json(&rows)?,
    };
    let mut out = CommandOutput::ok(body);
    if violated {
        out.status = ExitStatus::VerificationFailed;
        out.warnings.push("some c0 is not positive".into());
    }
    Ok(out)
}

/// `(gamma, closed, direct, method)`.
type SectorRow = (f64, f64, f64, &'static str);

/// Corner constants: closed form against sector brute force (convex) or
/// composition from convex sectors (concave).
pub fn cmd_sector(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let sigma = parse_symbol(&cfg.symbol)?;
    let gammas = parse_angles(&cfg.gammas)?;
    for &g in &gammas {
        check_corner_angle(g).map_err(|_| {
            CliError::config(format!(
                "corner angle {g} must lie in (0, pi) or (pi, 2 pi)"
            ))
        })?;
    }
    let tol = tolerance(cfg, DEFAULT_SECTOR_TOL)?;
    let spec = QuadratureSpec::default();
    let kernel = kernel_of(&sigma, &spec)?;
    let m = KernelMoments::of(&kernel, &spec)?;
    let rows: Vec<Result<SectorRow, CliError>> = gammas
        .par_iter()
        .map(|&g| {
            let closed = b0_closed(g, &m)?;
            let direct = b0_bruteforce(g, &kernel, &spec)?;
            let method = match direct.method {
                polytrace_core::oracle::SectorMethod::BruteForce => "brute-force",
                polytrace_core::oracle::SectorMethod::Composed => "composed",
                polytrace_core::oracle::SectorMethod::ClosedForm => "closed-form",
            };
            Ok((g, closed, direct.value, method))
        })
        .collect();
    let rows: Vec<_> = rows.into_iter().collect::<Result<_, _>>()?;
    let failed = rows.iter().any(|r| {
        let diff = (r.1 - r.2).abs();
        diff.is_nan() || diff > tol
    });

    #[derive(Serialize)]
    struct Row {
        gamma: f64,
        closed: f64,
        direct: f64,
        method: &'static str,
        diff: f64,
    }
    let rows: Vec<Row> = rows
        .into_iter()
        .map(|(gamma, closed, direct, method)| Row {
            gamma,
            closed,
            direct,
            method,
            diff: (closed - direct).abs(),
        })
        .collect();
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["gamma", "closed", "direct", "method", "diff"]);
            for r in &rows {
                t.row(&[
                    num(r.gamma),
                    num(r.closed),
                    num(r.direct),
                    r.method.into(),
                    num(r.diff),
                ]);
            }
            t.into_string()
        }
        Format::Json => json(&rows)?,
    };
    Ok(CommandOutput {
        body,
        status: if failed {
            ExitStatus::VerificationFailed
        } else {
            ExitStatus::Ok
        },
        warnings: Vec::new(),
    })
}

pub const PNF_NOTE: &str = "h(x) = x(1 - x) = x - x^2: c1 and c0 come only from the -x^2 part and are reported with that sign \
(c0 = -c0[z^2] < 0 for nonzero Fermi symbols); the particle number fluctuation itself is sign-definite, so compare magnitudes \
when matching against formulas written for x^2 - x or with the opposite sign convention";

/// Coefficients for the particle number fluctuation `h(x) = x(1 - x)`.
pub fn cmd_pnf(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let p = load_polygon(&cfg.polygon)?;
    if !cfg.symbol.starts_with("fermi") {
        return Err(CliError::config(
            "pnf needs a Fermi symbol: --symbol fermi:mu=<mu>,T=<T>",
        ));
    }
    let sigma = parse_symbol(&cfg.symbol)?;
    let spec = QuadratureSpec::default();
    let kernel = kernel_of(&sigma, &spec)?;
    let set = coefficients_with_kernel(&p, &TestFunction::pnf(), &sigma, &kernel, &spec)?;

    #[derive(Serialize)]
    struct Report<'a> {
        symbol: &'a str,
        polygon_area: f64,
        c2: f64,
        c1: f64,
        c0: f64,
        i2: f64,
        i3: f64,
        note: &'static str,
    }
    let report = Report {
        symbol: sigma.label(),
        polygon_area: p.area(),
        c2: set.c2.re,
        c1: set.c1.re,
        c0: set.c0.re,
        i2: set.moments.i2,
        i3: set.moments.i3,
        note: PNF_NOTE,
    };
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut t = Table::new(&["c2", "c1", "c0", "i2", "i3"]);
            t.row(&[
                num(report.c2),
                num(report.c1),
                num(report.c0),
                num(report.i2),
                num(report.i3),
            ]);
            t.into_string()
        }
    };
    Ok(CommandOutput::ok(body))
}

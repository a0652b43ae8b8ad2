//! Parsing of polygons, symbol specs, test functions and value lists.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use polytrace_core::{Polygon, RadialSymbol, TestFunction};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Polygon file contents: either `{"loops": [[[x, y], ...], ...]}` (first
/// loop outer, further loops holes or islands) or `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PolygonFile {
    Loops { loops: Vec<Vec<[f64; 2]>> },
    Vertices { vertices: Vec<[f64; 2]> },
}

impl PolygonFile {
    pub fn loops(&self) -> Vec<Vec<[f64; 2]>> {
        match self {
            PolygonFile::Loops { loops } => loops.clone(),
            PolygonFile::Vertices { vertices } => vec![vertices.clone()],
        }
    }

    pub fn from_polygon(p: &Polygon) -> Self {
        PolygonFile::Loops {
            loops: p
                .loops()
                .iter()
                .map(|l| l.iter().map(|v| [v.x, v.y]).collect())
                .collect(),
        }
    }
}

pub fn polygon_from_json(text: &str) -> Result<Polygon, CliError> {
    let file: PolygonFile = serde_json::from_str(text)?;
    Ok(Polygon::from_coords(&file.loops())?)
}

pub fn polygon_to_json(p: &Polygon) -> String {
    serde_json::to_string_pretty(&PolygonFile::from_polygon(p)).expect("plain data serializes")
}

fn numbers(args: &str, what: &str) -> Result<Vec<f64>, CliError> {
    args.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{what}: cannot parse number {s:?}")))
        })
        .collect()
}

/// Builtin polygons: `square`, `rect:a,b`, `ngon:n[,r]`, `lshape`,
/// `triangle:equilateral`.
pub fn named_polygon(name: &str) -> Option<Result<Polygon, CliError>> {
    let (head, args) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let built = match (head, args) {
        ("square", None) => Ok(Polygon::unit_square()),
        ("lshape", None) => Ok(Polygon::l_shape()),
        ("triangle", Some("equilateral")) => Ok(Polygon::equilateral_triangle()),
        ("rect", Some(a)) => numbers(a, "rect").and_then(|v| match v[..] {
            [a, b] => Ok(Polygon::rectangle(a, b)?),
            _ => Err(CliError::config("rect needs two side lengths: rect:a,b")),
        }),
        ("ngon", Some(a)) => numbers(a, "ngon").and_then(|v| {
            let (n, r) = match v[..] {
                [n] => (n, 1.0),
                [n, r] => (n, r),
                _ => return Err(CliError::config("ngon takes ngon:n or ngon:n,r")),
            };
            if n.fract() != 0.0 || n < 3.0 {
                return Err(CliError::config("ngon needs an integer vertex count >= 3"));
            }
            Ok(Polygon::regular(n as usize, r)?)
        }),
        _ => return None,
    };
    Some(built)
}

/// A builtin name, or else a path to a polygon JSON file.
pub fn load_polygon(source: &str) -> Result<Polygon, CliError> {
    if let Some(p) = named_polygon(source) {
        return p;
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config(format!(
            "polygon {source:?} is neither a builtin nor a readable file: {e}"
        ))
    })?;
    polygon_from_json(&text)
}

/// Symbol specs: `gaussian[:width=w]`, `fermi:mu=m,T=t`, `zero`; any of them
/// may add `scale=c`.
pub fn parse_symbol(spec: &str) -> Result<RadialSymbol, CliError> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let mut width = None;
    let mut mu = None;
    let mut temperature = None;
    let mut scale = 1.0;
    for kv in args.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("symbol parameter {kv:?} is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("symbol parameter {kv:?} is not a number")))?;
        match (kind, k.trim()) {
            ("gaussian", "width") => width = Some(v),
            ("fermi", "mu") => mu = Some(v),
            ("fermi", "T") => temperature = Some(v),
            (_, "scale") => scale = v,
            _ => {
                return Err(CliError::config(format!(
                    "unknown parameter {k:?} for symbol {kind:?}"
                )))
            }
        }
    }
    let base = match kind {
        "gaussian" => RadialSymbol::gaussian(width.unwrap_or(1.0))?,
        "fermi" => match (mu, temperature) {
            (Some(m), Some(t)) => RadialSymbol::fermi(m, t)?,
            _ => {
                return Err(CliError::config(
                    "fermi symbol needs mu and T: fermi:mu=1,T=1",
                ))
            }
        },
        "zero" => RadialSymbol::zero(),
        _ => return Err(CliError::config(format!("unknown symbol {kind:?}"))),
    };
    Ok(if scale == 1.0 {
        base
    } else {
        base.scaled(scale)
    })
}

fn parse_coefficient(s: &str) -> Result<Complex64, CliError> {
    let s = s.trim();
    s.parse::<f64>()
        .map(|x| Complex64::new(x, 0.0))
        .or_else(|_| s.parse::<Complex64>())
        .map_err(|_| CliError::config(format!("cannot parse coefficient {s:?}")))
}

/// `a1,a2[,a3...]` gives `h(z) = a1 z + a2 z^2 + ...`; `poly:c0,c1,...`
/// lists the full polynomial including the constant term, which must be 0.
/// Coefficients may be complex (`1+2i`).
pub fn parse_h(text: &str) -> Result<TestFunction, CliError> {
    let coeffs = if let Some(rest) = text.strip_prefix("poly:") {
        let mut all: Vec<Complex64> = rest
            .split(',')
            .map(parse_coefficient)
            .collect::<Result<_, _>>()?;
        if all.is_empty() || all[0] != Complex64::new(0.0, 0.0) {
            return Err(CliError::config(
                "test function must satisfy h(0) = 0 (constant term is not zero)",
            ));
        }
        all.remove(0);
        all
    } else {
        text.split(',')
            .map(parse_coefficient)
            .collect::<Result<_, _>>()?
    };
    TestFunction::new(coeffs).map_err(|e| CliError::config(format!("test function: {e}")))
}

pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let v = numbers(text, what)?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::config(format!("{what}: values must be finite")));
    }
    Ok(v)
}

/// Scale factors: finite and at least 1.
pub fn parse_scales(text: &str) -> Result<Vec<f64>, CliError> {
    let v = parse_list(text, "L")?;
    if v.is_empty() || v.iter().any(|&l| l < 1.0) {
        return Err(CliError::config("L values must be >= 1"));
    }
    Ok(v)
}

/// An angle in radians: a number, or `pi`, `3pi/2`, `pi/6`, `2*pi/3`.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let t = text.trim().replace('*', "");
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let bad = || CliError::config(format!("cannot parse angle {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let k = num.strip_suffix("pi").ok_or_else(bad)?;
    let k = if k.is_empty() {
        1.0
    } else {
        k.parse::<f64>().map_err(|_| bad())?
    };
    Ok(k * PI / den)
}

pub fn parse_angles(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').map(parse_angle).collect()
}

//! Polygon model: loops, corners, edge frames, triangulation and the set
//! covariogram `g(z) = |P ∩ (P + z)|`.

mod clip;
mod triangulate;
mod vec2;

use alloc::vec::Vec;
use core::f64::consts::PI;

pub use clip::{intersect_triangles, ConvexPoly};
use triangulate::triangulate;
pub use vec2::Vec2;

use crate::{Error, Result};

/// Adjacent edges with `|sin(turn)|` below this are rejected as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Half-width of the neighbourhood of `pi` where [`angle_function_f`]
/// switches to its Taylor series.
pub const F_SERIES_WINDOW: f64 = 1e-4;

/// Positively oriented triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Triangle {
    pub vertices: [Vec2; 3],
}

impl Triangle {
    /// Builds a triangle, reordering the vertices to counterclockwise.
    pub fn new(a: Vec2, b: Vec2, c: Vec2) -> Self {
        if (b - a).cross(c - a) < 0.0 {
            Triangle {
                vertices: [a, c, b],
            }
        } else {
            Triangle {
                vertices: [a, b, c],
            }
        }
    }

    pub fn area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        0.5 * (b - a).cross(c - a)
    }

    pub fn translated(&self, z: Vec2) -> Self {
        let [a, b, c] = self.vertices;
        Triangle {
            vertices: [a + z, b + z, c + z],
        }
    }

    pub fn bounds(&self) -> (Vec2, Vec2) {
        let [a, b, c] = self.vertices;
        (
            Vec2::new(a.x.min(b.x).min(c.x), a.y.min(b.y).min(c.y)),
            Vec2::new(a.x.max(b.x).max(c.x), a.y.max(b.y).max(c.y)),
        )
    }
}

/// Tangent and inward normal of an edge; `(tangent, normal)` is positively
/// oriented.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeFrame {
    pub start: Vec2,
    pub end: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub length: f64,
    /// Global index of the start vertex (also the edge's own index).
    pub start_vertex: usize,
    pub end_vertex: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VertexKind {
    Convex,
    Concave,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexCorner {
    pub position: Vec2,
    /// Interior angle in `(0, pi) ∪ (pi, 2 pi)`.
    pub angle: f64,
    pub kind: VertexKind,
    pub incoming_edge: usize,
    pub outgoing_edge: usize,
}

/// A validated polygon, possibly with holes. Outer loops run
/// counterclockwise, holes clockwise, so the interior is always on the left
/// of every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    loops: Vec<Vec<Vec2>>,
    edges: Vec<EdgeFrame>,
    corners: Vec<VertexCorner>,
    triangles: Vec<Triangle>,
    area: f64,
    perimeter: f64,
}

fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        s += pts[i].cross(pts[(i + 1) % n]);
    }
    0.5 * s
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test (touching counts).
fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let scale = (b - a).norm().max((d - c).norm()).max(1.0);
    let eps = 1e-14 * scale * scale;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    let s = |v: f64| {
        if v > eps {
            1
        } else if v < -eps {
            -1
        } else {
            0
        }
    };
    let (s1, s2, s3, s4) = (s(d1), s(d2), s(d3), s(d4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    (s1 == 0 && on_segment(c, d, a))
        || (s2 == 0 && on_segment(c, d, b))
        || (s3 == 0 && on_segment(a, b, c))
        || (s4 == 0 && on_segment(a, b, d))
}

/// Even-odd point-in-loop test.
fn point_in_loop(p: Vec2, pts: &[Vec2]) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (pts[i], pts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn check_loop_simple(idx: usize, pts: &[Vec2]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 1)..n {
            // Skip edges sharing a vertex with edge i.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Err(Error::SelfIntersection {
                    loop_a: idx,
                    loop_b: idx,
                });
            }
        }
    }
    Ok(())
}

fn check_loops_disjoint(ia: usize, a: &[Vec2], ib: usize, b: &[Vec2]) -> Result<()> {
    for i in 0..a.len() {
        let (p, q) = (a[i], a[(i + 1) % a.len()]);
        for j in 0..b.len() {
            let (r, s) = (b[j], b[(j + 1) % b.len()]);
            if segments_intersect(p, q, r, s) {
                return Err(Error::SelfIntersection {
                    loop_a: ia,
                    loop_b: ib,
                });
            }
        }
    }
    Ok(())
}

/// Interior angle at `v` for a boundary traversed `prev -> v -> next` with
/// the interior on the left.
fn interior_angle_at(prev: Vec2, v: Vec2, next: Vec2) -> f64 {
    let d_in = v - prev;
    let d_out = next - v;
    PI - libm::atan2(d_in.cross(d_out), d_in.dot(d_out))
}

/// Containment depth of every loop (0 = outermost).
fn loop_depths(loops: &[Vec<Vec2>]) -> Vec<usize> {
    (0..loops.len())
        .map(|i| {
            let probe = loops[i][0];
            (0..loops.len())
                .filter(|&j| j != i && point_in_loop(probe, &loops[j]))
                .count()
        })
        .collect()
}

impl Polygon {
    /// Validates `loops` and normalizes orientation.
    pub fn new(loops: Vec<Vec<Vec2>>) -> Result<Self> {
        if loops.is_empty() {
            return Err(Error::DegenerateLoop { loop_index: 0 });
        }
        for (i, l) in loops.iter().enumerate() {
            if l.len() < 3 || l.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
                return Err(Error::DegenerateLoop { loop_index: i });
            }
            let scale = l.iter().fold(0.0f64, |m, p| m.max(p.norm()));
            for k in 0..l.len() {
                if (l[(k + 1) % l.len()] - l[k]).norm() <= 1e-14 * scale.max(1e-300) {
                    return Err(Error::DegenerateLoop { loop_index: i });
                }
            }
        }
        for (i, l) in loops.iter().enumerate() {
            let n = l.len();
            for k in 0..n {
                let prev = l[(k + n - 1) % n];
                let next = l[(k + 1) % n];
                let d_in = l[k] - prev;
                let d_out = next - l[k];
                let sin = d_in.cross(d_out) / (d_in.norm() * d_out.norm());
                if libm::fabs(sin) < COLLINEAR_TOL {
                    return Err(Error::CollinearAdjacentEdges {
                        loop_index: i,
                        vertex: k,
                    });
                }
            }
        }
        for (i, l) in loops.iter().enumerate() {
            check_loop_simple(i, l)?;
            let scale = l.iter().fold(0.0f64, |m, p| m.max(p.norm()));
            if libm::fabs(signed_area(l)) <= 1e-14 * scale * scale {
                return Err(Error::DegenerateLoop { loop_index: i });
            }
        }
        for i in 0..loops.len() {
            for j in (i + 1)..loops.len() {
                check_loops_disjoint(i, &loops[i], j, &loops[j])?;
            }
        }

        let depths = loop_depths(&loops);
        let mut loops = loops;
        for (l, &depth) in loops.iter_mut().zip(&depths) {
            let ccw = signed_area(l) > 0.0;
            let want_ccw = depth % 2 == 0;
            if ccw != want_ccw {
                l.reverse();
            }
        }
        let area: f64 = loops.iter().map(|l| signed_area(l)).sum();
        if area <= 0.0 {
            return Err(Error::DegenerateLoop { loop_index: 0 });
        }
        let triangles = triangulate(&loops, &depths)?;
        Ok(Self::assemble(loops, None, triangles))
    }

    /// Builds from plain coordinate pairs.
    pub fn from_coords(loops: &[Vec<[f64; 2]>]) -> Result<Self> {
        Self::new(
            loops
                .iter()
                .map(|l| l.iter().map(|&[x, y]| Vec2::new(x, y)).collect())
                .collect(),
        )
    }

    /// Derived quantities for already-normalized loops. Corner angles are
    /// copied from `angles` when given (similarity maps keep them exact).
    fn assemble(loops: Vec<Vec<Vec2>>, angles: Option<&[f64]>, triangles: Vec<Triangle>) -> Self {
        let mut edges = Vec::new();
        let mut corners = Vec::new();
        let mut base = 0;
        let mut perimeter = 0.0;
        for l in &loops {
            let n = l.len();
            for k in 0..n {
                let start = l[k];
                let end = l[(k + 1) % n];
                let d = end - start;
                let length = d.norm();
                let tangent = d * (1.0 / length);
                perimeter += length;
                edges.push(EdgeFrame {
                    start,
                    end,
                    tangent,
                    normal: tangent.perp(),
                    length,
                    start_vertex: base + k,
                    end_vertex: base + (k + 1) % n,
                });
            }
            for k in 0..n {
                let prev = l[(k + n - 1) % n];
                let next = l[(k + 1) % n];
                let angle = match angles {
                    Some(a) => a[base + k],
                    None => interior_angle_at(prev, l[k], next),
                };
                corners.push(VertexCorner {
                    position: l[k],
                    angle,
                    kind: if angle < PI {
                        VertexKind::Convex
                    } else {
                        VertexKind::Concave
                    },
                    incoming_edge: base + (k + n - 1) % n,
                    outgoing_edge: base + k,
                });
            }
            base += n;
        }
        let area = loops.iter().map(|l| signed_area(l)).sum();
        Polygon {
            loops,
            edges,
            corners,
            triangles,
            area,
            perimeter,
        }
    }

    /// Regular `n`-gon inscribed in the circle of radius `circumradius`
    /// about the origin, first vertex on the positive x-axis.
    pub fn regular(n: usize, circumradius: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain("regular polygon needs n >= 3"));
        }
        if !(circumradius > 0.0 && circumradius.is_finite()) {
            return Err(Error::Domain("circumradius must be positive"));
        }
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * (k as f64) / (n as f64);
                Vec2::new(circumradius * libm::cos(t), circumradius * libm::sin(t))
            })
            .collect();
        Self::new(alloc::vec![pts])
    }

    /// Axis-aligned `a x b` rectangle with a corner at the origin.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Domain("rectangle sides must be positive"));
        }
        Self::from_coords(&[alloc::vec![[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]]])
    }

    pub fn unit_square() -> Self {
        Self::rectangle(1.0, 1.0).expect("unit square is valid")
    }

    /// L-shaped hexagon (0,0),(2,0),(2,1),(1,1),(1,2),(0,2).
    pub fn l_shape() -> Self {
        Self::from_coords(&[alloc::vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
        ]])
        .expect("L-shape is valid")
    }

    /// Equilateral triangle with unit side.
    pub fn equilateral_triangle() -> Self {
        Self::from_coords(&[alloc::vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [0.5, 0.5 * libm::sqrt(3.0)]
        ]])
        .expect("equilateral triangle is valid")
    }

    /// The dilate `L * P`. Angles are carried over unchanged.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain("scale factor must be positive"));
        }
        let loops = self
            .loops
            .iter()
            .map(|l| l.iter().map(|&p| p * factor).collect())
            .collect();
        let triangles = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.vertices;
                Triangle {
                    vertices: [a * factor, b * factor, c * factor],
                }
            })
            .collect();
        let angles: Vec<f64> = self.corners.iter().map(|c| c.angle).collect();
        Ok(Self::assemble(loops, Some(&angles), triangles))
    }

    /// Image under a rotation by `theta` followed by a translation. Angles
    /// are carried over unchanged.
    pub fn rigid_motion(&self, theta: f64, shift: Vec2) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let map = |p: Vec2| Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y) + shift;
        let loops = self
            .loops
            .iter()
            .map(|l| l.iter().map(|&p| map(p)).collect())
            .collect();
        let triangles = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, cc] = t.vertices;
                Triangle {
                    vertices: [map(a), map(b), map(cc)],
                }
            })
            .collect();
        let angles: Vec<f64> = self.corners.iter().map(|c| c.angle).collect();
        Self::assemble(loops, Some(&angles), triangles)
    }

    pub fn loops(&self) -> &[Vec<Vec2>] {
        &self.loops
    }

    pub fn edges(&self) -> &[EdgeFrame] {
        &self.edges
    }

    pub fn corners(&self) -> &[VertexCorner] {
        &self.corners
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn vertex_count(&self) -> usize {
        self.corners.len()
    }

    pub fn interior_angle(&self, vertex: usize) -> Result<f64> {
        self.corners
            .get(vertex)
            .map(|c| c.angle)
            .ok_or(Error::IndexOutOfRange {
                index: vertex,
                len: self.corners.len(),
            })
    }

    /// `F(E) = -cot(gamma_start) - cot(gamma_end)` for the two corners
    /// bounding edge `edge`.
    pub fn edge_f(&self, edge: usize) -> Result<f64> {
        let e = self.edges.get(edge).ok_or(Error::IndexOutOfRange {
            index: edge,
            len: self.edges.len(),
        })?;
        let g1 = self.corners[e.start_vertex].angle;
        let g2 = self.corners[e.end_vertex].angle;
        Ok(-cot(g1) - cot(g2))
    }

    pub fn bounds(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.loops.iter().flatten() {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let pts: Vec<Vec2> = self.loops.iter().flatten().copied().collect();
        let mut d = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                d = d.max((pts[i] - pts[j]).norm());
            }
        }
        d
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.loops.iter().filter(|l| point_in_loop(p, l)).count() % 2 == 1
    }

    /// `|P ∩ (P + z)|`, summed exactly over pairs of triangles.
    pub fn covariogram(&self, z: Vec2) -> f64 {
        let mut total = 0.0;
        for ti in &self.triangles {
            let (lo_i, hi_i) = ti.bounds();
            for tj in &self.triangles {
                let (lo_j, hi_j) = tj.bounds();
                if lo_j.x + z.x >= hi_i.x
                    || hi_j.x + z.x <= lo_i.x
                    || lo_j.y + z.y >= hi_i.y
                    || hi_j.y + z.y <= lo_i.y
                {
                    continue;
                }
                total += intersect_triangles(ti, &tj.translated(z)).area();
            }
        }
        total.clamp(0.0, self.area)
    }

    /// Segments in translation space across which the combinatorics of
    /// `P ∩ (P + z)` change: a vertex of one copy meets an edge of the
    /// other. The covariogram is a quadratic polynomial in `z` on each cell
    /// of their arrangement.
    pub fn covariogram_kink_segments(&self) -> Vec<(Vec2, Vec2)> {
        let mut segs = Vec::with_capacity(2 * self.corners.len() * self.edges.len());
        for c in &self.corners {
            for e in &self.edges {
                let a = e.start - c.position;
                let b = e.end - c.position;
                segs.push((a, b));
                segs.push((-a, -b));
            }
        }
        segs
    }

    /// Polar angles in `[0, 2 pi)` where the circle of radius `r` about the
    /// origin crosses a covariogram kink segment, sorted and deduplicated.
    pub fn covariogram_kink_angles(&self, r: f64, segments: &[(Vec2, Vec2)]) -> Vec<f64> {
        let mut angles = Vec::new();
        for &(a, b) in segments {
            let d = b - a;
            // |a + s d|^2 = r^2
            let qa = d.dot(d);
            let qb = 2.0 * a.dot(d);
            let qc = a.dot(a) - r * r;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 || qa == 0.0 {
                continue;
            }
            let sq = libm::sqrt(disc);
            for s in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if (0.0..=1.0).contains(&s) {
                    let p = a + d * s;
                    let mut t = libm::atan2(p.y, p.x);
                    if t < 0.0 {
                        t += 2.0 * PI;
                    }
                    angles.push(t);
                }
            }
        }
        angles.sort_by(|a, b| a.total_cmp(b));
        angles.dedup_by(|a, b| libm::fabs(*a - *b) < 1e-15);
        angles
    }

    /// Radii where the set of circle/kink-segment crossings changes:
    /// segment endpoints and tangency points.
    pub fn covariogram_kink_radii(&self, segments: &[(Vec2, Vec2)]) -> Vec<f64> {
        let mut radii = Vec::new();
        for &(a, b) in segments {
            radii.push(a.norm());
            radii.push(b.norm());
            let d = b - a;
            let dd = d.dot(d);
            if dd > 0.0 {
                let s = -a.dot(d) / dd;
                if s > 0.0 && s < 1.0 {
                    radii.push((a + d * s).norm());
                }
            }
        }
        radii.retain(|&r| r > 0.0);
        radii.sort_by(|a, b| a.total_cmp(b));
        radii.dedup_by(|a, b| libm::fabs(*a - *b) <= 1e-12 * b.max(1.0));
        radii
    }
}

pub(crate) fn cot(x: f64) -> f64 {
    libm::cos(x) / libm::sin(x)
}

/// `f(gamma) = 1 + (pi - gamma) cot(gamma)`, the per-corner weight of the
/// constant coefficient. Near `pi` the series `e^2/3 + e^4/45`
/// (`e = gamma - pi`) replaces the cancelling closed form.
pub fn angle_function_f(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0 * PI) {
        return Err(Error::Domain("angle must lie in (0, 2 pi)"));
    }
    let eps = gamma - PI;
    if libm::fabs(eps) < F_SERIES_WINDOW {
        let e2 = eps * eps;
        return Ok(e2 / 3.0 + e2 * e2 / 45.0);
    }
    Ok(1.0 + (PI - gamma) * cot(gamma))
}

/// Checks that `gamma` is a legal corner angle: in `(0, 2 pi)` and not `pi`.
pub fn check_corner_angle(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 2.0 * PI) || gamma == PI {
        return Err(Error::Domain(
            "corner angle must lie in (0, pi) ∪ (pi, 2 pi)",
        ));
    }
    Ok(())
}

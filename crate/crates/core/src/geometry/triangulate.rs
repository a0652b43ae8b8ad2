//! Ear-clipping triangulation. Holes are first spliced into their outer
//! loop through a bridge to a mutually visible vertex.

use alloc::vec::Vec;

use super::{point_in_loop, Triangle, Vec2};
use crate::{Error, Result};

/// Triangulates normalized loops (outer CCW, holes CW) with the given
/// containment depths.
pub(crate) fn triangulate(loops: &[Vec<Vec2>], depths: &[usize]) -> Result<Vec<Triangle>> {
    let mut triangles = Vec::new();
    for (oi, outer) in loops.iter().enumerate() {
        if depths[oi] % 2 == 1 {
            continue;
        }
        let mut holes: Vec<&Vec<Vec2>> = loops
            .iter()
            .enumerate()
            .filter(|&(hi, h)| depths[hi] == depths[oi] + 1 && point_in_loop(h[0], outer))
            .map(|(_, h)| h)
            .collect();
        holes.sort_by(|a, b| max_x(b).total_cmp(&max_x(a)));
        let mut ring = outer.clone();
        for h in holes {
            ring = bridge_hole(&ring, h)?;
        }
        ear_clip(ring, &mut triangles)?;
    }
    Ok(triangles)
}

fn max_x(l: &[Vec2]) -> f64 {
    l.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.x))
}

fn scale_of(pts: &[Vec2]) -> f64 {
    pts.iter().fold(1e-300f64, |m, p| {
        m.max(libm::fabs(p.x)).max(libm::fabs(p.y))
    })
}

/// Splices hole `hole` (CW) into `ring` via a visible vertex found by
/// casting a ray in +x from the hole's rightmost vertex.
fn bridge_hole(ring: &[Vec2], hole: &[Vec2]) -> Result<Vec<Vec2>> {
    let mut mi = 0;
    for (i, p) in hole.iter().enumerate() {
        if p.x > hole[mi].x || (p.x == hole[mi].x && p.y > hole[mi].y) {
            mi = i;
        }
    }
    let m = hole[mi];
    let n = ring.len();

    // Nearest upward-crossing edge to the right of m.
    let mut best: Option<(f64, usize)> = None;
    for i in 0..n {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        if !(p.y < q.y && p.y <= m.y && m.y <= q.y) {
            continue;
        }
        let x = p.x + (m.y - p.y) / (q.y - p.y) * (q.x - p.x);
        if x < m.x {
            continue;
        }
        if best.is_none_or(|(bx, _)| x < bx) {
            best = Some((x, i));
        }
    }
    let (ix, ei) = best.ok_or(Error::TriangulationFailure)?;
    let (p, q) = (ring[ei], ring[(ei + 1) % n]);
    let visible = if p.y == m.y {
        ei
    } else if q.y == m.y {
        (ei + 1) % n
    } else {
        let pi = if p.x > q.x { ei } else { (ei + 1) % n };
        let cand = ring[pi];
        let hit = Vec2::new(ix, m.y);
        let eps = 1e-14 * scale_of(ring) * scale_of(ring);
        let mut chosen = pi;
        let mut best_key = (f64::INFINITY, f64::INFINITY);
        for j in 0..n {
            if j == pi || ring[j] == cand {
                continue;
            }
            let r = ring[j];
            let prev = ring[(j + n - 1) % n];
            let next = ring[(j + 1) % n];
            let reflex = (r - prev).cross(next - r) <= 0.0;
            if !reflex || !in_triangle(m, hit, cand, r, eps) {
                continue;
            }
            let d = r - m;
            let key = (libm::fabs(libm::atan2(d.y, d.x)), d.norm());
            if key < best_key {
                best_key = key;
                chosen = j;
            }
        }
        chosen
    };

    let mut out = Vec::with_capacity(n + hole.len() + 2);
    out.extend_from_slice(&ring[..=visible]);
    for k in 0..hole.len() {
        out.push(hole[(mi + k) % hole.len()]);
    }
    out.push(m);
    out.push(ring[visible]);
    out.extend_from_slice(&ring[visible + 1..]);
    Ok(out)
}

/// Closed triangle membership for either orientation of `a, b, c`.
fn in_triangle(a: Vec2, b: Vec2, c: Vec2, p: Vec2, eps: f64) -> bool {
    let d1 = (b - a).cross(p - a);
    let d2 = (c - b).cross(p - b);
    let d3 = (a - c).cross(p - c);
    let has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
    let has_pos = d1 > eps || d2 > eps || d3 > eps;
    !(has_neg && has_pos)
}

fn ear_clip(mut ring: Vec<Vec2>, out: &mut Vec<Triangle>) -> Result<()> {
    let s = scale_of(&ring);
    let eps = 1e-14 * s * s;
    while ring.len() > 3 {
        let n = ring.len();
        let mut clipped = false;
        for i in 0..n {
            let a = ring[(i + n - 1) % n];
            let b = ring[i];
            let c = ring[(i + 1) % n];
            let turn = (b - a).cross(c - b);
            if libm::fabs(turn) <= eps {
                if (b - a).dot(c - b) > 0.0 {
                    // Straight vertex created by earlier clipping: drop it.
                    ring.remove(i);
                    clipped = true;
                    break;
                }
                continue;
            }
            if turn < 0.0 {
                continue;
            }
            let blocked = ring.iter().enumerate().any(|(j, &p)| {
                j != i
                    && j != (i + n - 1) % n
                    && j != (i + 1) % n
                    && p != a
                    && p != b
                    && p != c
                    && in_triangle(a, b, c, p, eps)
            });
            if blocked {
                continue;
            }
            out.push(Triangle::new(a, b, c));
            ring.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(Error::TriangulationFailure);
        }
    }
    let t = Triangle::new(ring[0], ring[1], ring[2]);
    if t.area() > eps {
        out.push(t);
    }
    Ok(())
}

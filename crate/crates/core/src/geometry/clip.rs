//! Convex clipping with inline storage; no allocation on the hot path.

use super::{Triangle, Vec2};

const CAP: usize = 16;

/// Convex polygon with at most 16 vertices, counterclockwise.
#[derive(Debug, Clone, Copy)]
pub struct ConvexPoly {
    pts: [Vec2; CAP],
    len: usize,
}

impl ConvexPoly {
    pub fn from_slice(pts: &[Vec2]) -> Self {
        assert!(pts.len() <= CAP);
        let mut p = ConvexPoly {
            pts: [Vec2::default(); CAP],
            len: pts.len(),
        };
        p.pts[..pts.len()].copy_from_slice(pts);
        p
    }

    pub fn from_triangle(t: &Triangle) -> Self {
        Self::from_slice(&t.vertices)
    }

    /// Axis-aligned rectangle `[lo, hi]`.
    pub fn rect(lo: Vec2, hi: Vec2) -> Self {
        Self::from_slice(&[lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.pts[..self.len]
    }

    pub fn is_empty(&self) -> bool {
        self.len < 3
    }

    pub fn area(&self) -> f64 {
        if self.len < 3 {
            return 0.0;
        }
        let o = self.pts[0];
        let mut s = 0.0;
        for i in 1..self.len - 1 {
            s += (self.pts[i] - o).cross(self.pts[i + 1] - o);
        }
        (0.5 * s).max(0.0)
    }

    /// Area-weighted centroid; `None` for an empty polygon.
    pub fn centroid(&self) -> Option<(f64, Vec2)> {
        if self.len < 3 {
            return None;
        }
        let o = self.pts[0];
        let mut a = 0.0;
        let mut c = Vec2::default();
        for i in 1..self.len - 1 {
            let (p, q) = (self.pts[i] - o, self.pts[i + 1] - o);
            let w = 0.5 * p.cross(q);
            a += w;
            c = c + (p + q) * (w / 3.0);
        }
        if a <= 0.0 {
            return None;
        }
        Some((a, o + c * (1.0 / a)))
    }

    /// Keeps the part left of the directed line `a -> b`.
    pub fn clip_half_plane(&self, a: Vec2, b: Vec2) -> Self {
        let mut out = ConvexPoly {
            pts: [Vec2::default(); CAP],
            len: 0,
        };
        if self.len == 0 {
            return out;
        }
        let d = b - a;
        let side = |p: Vec2| d.cross(p - a);
        for i in 0..self.len {
            let p = self.pts[i];
            let q = self.pts[(i + 1) % self.len];
            let sp = side(p);
            let sq = side(q);
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
                let t = sp / (sp - sq);
                out.push(p + (q - p) * t);
            }
        }
        out
    }

    /// Intersection with another convex counterclockwise polygon.
    pub fn clip_convex(&self, other: &[Vec2]) -> Self {
        let mut cur = *self;
        let n = other.len();
        for i in 0..n {
            if cur.is_empty() {
                break;
            }
            cur = cur.clip_half_plane(other[i], other[(i + 1) % n]);
        }
        cur
    }

    fn push(&mut self, p: Vec2) {
        if self.len < CAP {
            self.pts[self.len] = p;
            self.len += 1;
        }
    }
}

/// `T_a ∩ T_b` for counterclockwise triangles.
pub fn intersect_triangles(a: &Triangle, b: &Triangle) -> ConvexPoly {
    ConvexPoly::from_triangle(a).clip_convex(&b.vertices)
}

//! 2-D convex polygons in the rate plane: hulls, halfspace intersection and
//! ray support.

use serde::{Deserialize, Serialize};

/// Absolute tolerance for membership, vertex equality and collinearity.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub const fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.r2, self.r1)
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }

    pub fn dist(&self, other: &RatePair) -> f64 {
        (self.r1 - other.r1).hypot(self.r2 - other.r2)
    }
}

impl From<(f64, f64)> for RatePair {
    fn from((r1, r2): (f64, f64)) -> Self {
        Self::new(r1, r2)
    }
}

/// The constraint `a1 R1 + a2 R2 <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

impl Halfspace {
    pub fn new(a1: f64, a2: f64, b: f64) -> Self {
        assert!(a1 != 0.0 || a2 != 0.0, "halfspace normal must be non-zero");
        Self { a1, a2, b }
    }

    /// `b - a . p`; non-negative inside.
    pub fn slack(&self, p: &RatePair) -> f64 {
        self.b - (self.a1 * p.r1 + self.a2 * p.r2)
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.a2, self.a1, self.b)
    }

    fn normalized(&self) -> Self {
        let n = self.a1.hypot(self.a2);
        Self {
            a1: self.a1 / n,
            a2: self.a2 / n,
            b: self.b / n,
        }
    }

    fn intersect(&self, other: &Halfspace) -> Option<RatePair> {
        let det = self.a1 * other.a2 - self.a2 * other.a1;
        let scale = self.a1.hypot(self.a2) * other.a1.hypot(other.a2);
        if det.abs() <= 1e-14 * scale {
            return None;
        }
        Some(RatePair::new(
            (self.b * other.a2 - self.a2 * other.b) / det,
            (self.a1 * other.b - self.b * other.a1) / det,
        ))
    }
}

fn cross(o: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Monotone-chain convex hull. Returns extreme points counter-clockwise,
/// starting from the lowest-then-leftmost point, with duplicates and
/// collinear points removed.
pub fn convex_hull(points: &[RatePair]) -> Vec<RatePair> {
    let mut pts: Vec<RatePair> = Vec::with_capacity(points.len());
    for p in points {
        if !pts.iter().any(|q| q.dist(p) <= GEOM_TOL) {
            pts.push(*p);
        }
    }
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let hull = drop_collinear(lower);
    rotate_to_lowest(hull)
}

/// Removes vertices whose distance to the chord of their neighbours is
/// below `GEOM_TOL`.
fn drop_collinear(mut poly: Vec<RatePair>) -> Vec<RatePair> {
    loop {
        let n = poly.len();
        if n < 3 {
            return poly;
        }
        let victim = (0..n).find(|&i| {
            let prev = &poly[(i + n - 1) % n];
            let next = &poly[(i + 1) % n];
            let chord = prev.dist(next);
            chord > 0.0 && cross(prev, &poly[i], next).abs() / chord <= GEOM_TOL
        });
        match victim {
            Some(i) => {
                poly.remove(i);
            }
            None => return poly,
        }
    }
}

fn rotate_to_lowest(mut poly: Vec<RatePair>) -> Vec<RatePair> {
    if let Some(start) = (0..poly.len()).min_by(|&i, &j| {
        let (a, b) = (&poly[i], &poly[j]);
        a.r2.total_cmp(&b.r2).then(a.r1.total_cmp(&b.r1))
    }) {
        poly.rotate_left(start);
    }
    poly
}

/// Extreme points of a bounded halfspace intersection, counter-clockwise.
pub fn vertices_of(halfspaces: &[Halfspace]) -> Vec<RatePair> {
    let mut candidates = Vec::new();
    for (i, h) in halfspaces.iter().enumerate() {
        for g in &halfspaces[i + 1..] {
            if let Some(p) = h.intersect(g) {
                // adding 0.0 turns -0.0 into 0.0
                let p = RatePair::new(p.r1 + 0.0, p.r2 + 0.0);
                if halfspaces.iter().all(|c| c.normalized().slack(&p) >= -GEOM_TOL) {
                    candidates.push(p);
                }
            }
        }
    }
    convex_hull(&candidates)
}

/// Outward edge constraints of a counter-clockwise polygon, normalised to
/// unit normals.
pub fn halfspaces_of(poly: &[RatePair]) -> Vec<Halfspace> {
    let n = poly.len();
    if n < 3 {
        return Vec::new();
    }
    (0..n)
        .map(|i| {
            let (p, q) = (&poly[i], &poly[(i + 1) % n]);
            let (dx, dy) = (q.r1 - p.r1, q.r2 - p.r2);
            Halfspace::new(dy, -dx, dy * p.r1 - dx * p.r2).normalized()
        })
        .collect()
}

/// Distance from the origin to the boundary along the unit direction
/// `(cos theta, sin theta)`. Assumes the origin is inside.
pub fn ray_support(halfspaces: &[Halfspace], theta: f64) -> f64 {
    let (u1, u2) = (theta.cos(), theta.sin());
    halfspaces
        .iter()
        .filter_map(|h| {
            let h = h.normalized();
            let dot = h.a1 * u1 + h.a2 * u2;
            (dot > 1e-15).then(|| h.b / dot)
        })
        .fold(f64::INFINITY, f64::min)
}

/// True when every vertex of `a` is within `tol` of a vertex of `b` and vice
/// versa.
pub fn same_vertex_set(a: &[RatePair], b: &[RatePair], tol: f64) -> bool {
    let covered = |xs: &[RatePair], ys: &[RatePair]| xs.iter().all(|x| ys.iter().any(|y| x.dist(y) <= tol));
    covered(a, b) && covered(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<RatePair> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn hull_drops_interior_point() {
        let h = convex_hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.2, 0.2)]));
        assert_eq!(h, pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]));
    }

    #[test]
    fn hull_drops_collinear_and_duplicate_points() {
        let h = convex_hull(&pts(&[
            (0.0, 0.0),
            (0.5, 0.0),
            (1.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
        ]));
        assert_eq!(h, pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
    }

    #[test]
    fn hull_of_degenerate_inputs() {
        assert_eq!(convex_hull(&pts(&[(0.3, 0.3)])), pts(&[(0.3, 0.3)]));
        assert_eq!(convex_hull(&pts(&[(0.0, 0.0), (0.0, 0.0)])).len(), 1);
    }

    #[test]
    fn halfspace_round_trip() {
        let hs = vec![
            Halfspace::new(-1.0, 0.0, 0.0),
            Halfspace::new(0.0, -1.0, 0.0),
            Halfspace::new(1.0, 0.0, 1.0),
            Halfspace::new(0.0, 1.0, 1.0),
            Halfspace::new(1.0, 1.5, 1.5),
            Halfspace::new(1.5, 1.0, 1.5),
        ];
        let v = vertices_of(&hs);
        assert!(same_vertex_set(
            &v,
            &pts(&[(0.0, 0.0), (1.0, 0.0), (0.6, 0.6), (0.0, 1.0)]),
            1e-12
        ));
        let back = vertices_of(&halfspaces_of(&v));
        assert!(same_vertex_set(&v, &back, 1e-12));
    }

    #[test]
    fn ray_support_of_unit_square() {
        let sq = halfspaces_of(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        assert!((ray_support(&sq, 0.0) - 1.0).abs() < 1e-12);
        assert!((ray_support(&sq, std::f64::consts::FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-12);
    }
}

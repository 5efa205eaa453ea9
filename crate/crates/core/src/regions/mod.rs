//! Inner and outer rate regions.
//!
//! Regimes are split by the cross-link probability:
//!
//! ```text
//! Weak      p_c <= p_d / (1 + p_d)
//! Moderate  p_d / (1 + p_d) < p_c <= p_d
//! Strong    p_c > p_d
//! ```
//!
//! In the weak and strong regimes the inner and outer regions coincide. In
//! the moderate regime they differ and [`region_gap`] measures by how much.

mod polygon;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::hk;

pub use polygon::{
    convex_hull, halfspaces_of, ray_support, same_vertex_set, vertices_of, Halfspace, RatePair, GEOM_TOL,
};

/// Number of ray directions sampled by [`region_gap`] over the quarter plane.
pub const GAP_ANGLES: usize = 361;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Weak,
    Moderate,
    Strong,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Weak => "weak",
            Regime::Moderate => "moderate",
            Regime::Strong => "strong",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Weak owns `p_c = p_d/(1+p_d)`, Moderate owns `p_c = p_d`.
pub fn classify_regime(params: &ChannelParams) -> Result<Regime> {
    let (pd, pc) = (params.p_d(), params.p_c());
    if pd == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    Ok(if pc <= pd / (1.0 + pd) {
        Regime::Weak
    } else if pc <= pd {
        Regime::Moderate
    } else {
        Regime::Strong
    })
}

/// A bounded convex polygon in the rate plane, kept both as constraints and
/// as its counter-clockwise extreme points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<RatePair>,
}

fn nonneg() -> [Halfspace; 2] {
    [Halfspace::new(-1.0, 0.0, 0.0), Halfspace::new(0.0, -1.0, 0.0)]
}

impl RateRegion {
    /// Region cut out by `halfspaces` and the non-negative quadrant.
    pub fn from_halfspaces(extra: impl IntoIterator<Item = Halfspace>) -> Self {
        let mut halfspaces: Vec<Halfspace> = nonneg().to_vec();
        halfspaces.extend(extra);
        let vertices = vertices_of(&halfspaces);
        Self { halfspaces, vertices }
    }

    /// Convex hull of `points`.
    pub fn from_points(points: &[RatePair]) -> Self {
        let vertices = convex_hull(points);
        let halfspaces = halfspaces_of(&vertices);
        Self { halfspaces, vertices }
    }

    /// True when every constraint holds with slack at least `-tol`.
    pub fn contains(&self, p: &RatePair, tol: f64) -> bool {
        if self.vertices.len() < 3 {
            // lower-dimensional: fall back to hull distance
            return match self.vertices.as_slice() {
                [] => false,
                [v] => v.dist(p) <= tol,
                [a, b] => segment_dist(a, b, p) <= tol,
                _ => unreachable!(),
            };
        }
        self.halfspaces.iter().all(|h| h.slack(p) >= -tol)
    }

    /// Every vertex of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &RateRegion, tol: f64) -> bool {
        self.vertices.iter().all(|v| other.contains(v, tol))
    }

    pub fn same_as(&self, other: &RateRegion, tol: f64) -> bool {
        same_vertex_set(&self.vertices, &other.vertices, tol)
    }

    /// Mirror image under `(R1, R2) -> (R2, R1)`.
    pub fn swapped(&self) -> Self {
        let pts: Vec<RatePair> = self.vertices.iter().map(RatePair::swapped).collect();
        Self {
            halfspaces: self.halfspaces.iter().map(Halfspace::swapped).collect(),
            vertices: convex_hull(&pts),
        }
    }

    /// Distance to the boundary along direction `theta` from the origin.
    pub fn support(&self, theta: f64) -> f64 {
        ray_support(&self.halfspaces, theta)
    }

    /// Largest `2R` with `(R, R)` in the region.
    pub fn max_symmetric_sum(&self) -> f64 {
        self.support(std::f64::consts::FRAC_PI_4) * std::f64::consts::SQRT_2
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.vertices.iter().map(RatePair::sum).fold(0.0, f64::max)
    }
}

fn segment_dist(a: &RatePair, b: &RatePair, p: &RatePair) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    let t = (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0);
    RatePair::new(a.r1 + t * dx, a.r2 + t * dy).dist(p)
}

/// Outer bound for the regime the parameters fall in.
pub fn outer_region(params: &ChannelParams) -> Result<RateRegion> {
    let regime = classify_regime(params)?;
    Ok(outer_region_for(params, regime))
}

/// Evaluates one regime's outer-bound formula regardless of which regime the
/// parameters fall in. Used to check continuity across regime boundaries.
pub fn outer_region_for(params: &ChannelParams, regime: Regime) -> RateRegion {
    let (pd, pc) = (params.p_d(), params.p_c());
    let s = params.union_prob();
    let mut hs = vec![Halfspace::new(1.0, 0.0, pd), Halfspace::new(0.0, 1.0, pd)];
    match regime {
        Regime::Weak => {
            // beta diverges at p_c = 0; the slant bounds then reduce to R_i <= p_d
            if pc > 0.0 {
                let beta = (pd - pc) / (pd * pc);
                let rhs = beta * pd + pc - pd * pc;
                hs.push(Halfspace::new(1.0, beta, rhs));
                hs.push(Halfspace::new(beta, 1.0, rhs));
            }
        }
        Regime::Moderate => {
            let ratio = pd / pc;
            hs.push(Halfspace::new(1.0, 1.0, 2.0 * pc));
            hs.push(Halfspace::new(1.0, ratio, ratio * s));
            hs.push(Halfspace::new(ratio, 1.0, ratio * s));
        }
        Regime::Strong => hs.push(Halfspace::new(1.0, 1.0, s)),
    }
    RateRegion::from_halfspaces(hs)
}

/// Capacity region of the multiple-access channel seen by one receiver when
/// it decodes both messages.
pub fn mac_region(params: &ChannelParams, at_receiver: usize) -> Result<RateRegion> {
    let (pd, pc) = (params.p_d(), params.p_c());
    let sum = 1.0 - params.q_d() * params.q_c();
    let (cap1, cap2) = match at_receiver {
        1 => (pd, pc),
        2 => (pc, pd),
        other => return Err(Error::Domain(format!("receiver must be 1 or 2, got {other}"))),
    };
    Ok(RateRegion::from_halfspaces([
        Halfspace::new(1.0, 0.0, cap1),
        Halfspace::new(0.0, 1.0, cap2),
        Halfspace::new(1.0, 1.0, sum),
    ]))
}

/// The six candidate corner points of the achievable region.
pub fn corner_points(params: &ChannelParams) -> Vec<RatePair> {
    let (pd, qd, pc, qc) = (params.p_d(), params.q_d(), params.p_c(), params.q_c());
    vec![
        RatePair::new(0.0, 0.0),
        RatePair::new(pd, 0.0),
        RatePair::new(0.0, pd),
        RatePair::new(pd, qd * pc),
        RatePair::new(qd * pc, pd),
        RatePair::new(pd * qc, pd * qc),
    ]
}

/// Rates decodable when each receiver either decodes both messages or treats
/// interference as erasure, convexified. In the moderate regime the HK
/// symmetric point is added to the hull.
pub fn inner_region(params: &ChannelParams) -> Result<RateRegion> {
    let regime = classify_regime(params)?;
    let pd = params.p_d();
    let erasure_rate = pd * params.q_c();
    let mac1 = mac_region(params, 1)?.halfspaces;
    let mac2 = mac_region(params, 2)?.halfspaces;
    let erase1 = vec![Halfspace::new(1.0, 0.0, erasure_rate)];
    let erase2 = vec![Halfspace::new(0.0, 1.0, erasure_rate)];

    let mut points = Vec::new();
    for rx1 in [&mac1, &erase1] {
        for rx2 in [&mac2, &erase2] {
            let sub = RateRegion::from_halfspaces(rx1.iter().chain(rx2.iter()).copied());
            points.extend(sub.vertices);
        }
    }
    if regime == Regime::Moderate {
        let half = 0.5 * hk::symmetric_sum_rate(params)?;
        points.push(RatePair::new(half, half));
    }
    Ok(RateRegion::from_points(&points))
}

/// Largest radial distance between the outer and inner boundaries over
/// [`GAP_ANGLES`] directions spanning the quarter plane.
pub fn region_gap(inner: &RateRegion, outer: &RateRegion) -> Result<f64> {
    if let Some(v) = inner.vertices.iter().find(|v| !outer.contains(v, GEOM_TOL)) {
        return Err(Error::InclusionViolated { r1: v.r1, r2: v.r2 });
    }
    let step = std::f64::consts::FRAC_PI_2 / (GAP_ANGLES - 1) as f64;
    Ok((0..GAP_ANGLES)
        .map(|k| {
            let theta = k as f64 * step;
            (outer.support(theta) - inner.support(theta)).max(0.0)
        })
        .fold(0.0, f64::max))
}

/// Serializable view `{params, regime, halfspaces, vertices}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDoc {
    pub params: ChannelParams,
    pub regime: Regime,
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<[f64; 2]>,
}

impl RegionDoc {
    pub fn new(params: &ChannelParams, regime: Regime, region: &RateRegion) -> Self {
        Self {
            params: *params,
            regime,
            halfspaces: region.halfspaces.clone(),
            vertices: region.vertices.iter().map(|v| [v.r1, v.r2]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pd: f64, pc: f64) -> ChannelParams {
        ChannelParams::new(pd, pc).unwrap()
    }

    fn has_vertex(r: &RateRegion, p: (f64, f64)) -> bool {
        r.vertices.iter().any(|v| v.dist(&p.into()) <= 1e-9)
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify_regime(&params(1.0, 0.4)).unwrap(), Regime::Weak);
        assert_eq!(classify_regime(&params(1.0, 0.6)).unwrap(), Regime::Moderate);
        assert_eq!(classify_regime(&params(0.5, 0.5)).unwrap(), Regime::Moderate);
        assert_eq!(classify_regime(&params(1.0, 0.5)).unwrap(), Regime::Weak);
        assert_eq!(classify_regime(&params(0.5, 0.6)).unwrap(), Regime::Strong);
        assert_eq!(classify_regime(&params(0.0, 0.5)), Err(Error::DegenerateChannel));
    }

    #[test]
    fn outer_weak_example() {
        let r = outer_region(&params(1.0, 0.4)).unwrap();
        assert!(has_vertex(&r, (0.6, 0.6)));
        let slant = r
            .halfspaces
            .iter()
            .find(|h| h.a1 == 1.0 && (h.a2 - 1.5).abs() < 1e-12)
            .unwrap();
        assert!((slant.b - 1.5).abs() < 1e-12);
        assert!(r.contains(&RatePair::new(0.6, 0.6), 1e-9));
        assert!(!r.contains(&RatePair::new(0.7, 0.7), 1e-9));
        assert!(r.contains(&RatePair::ORIGIN, 0.0));
    }

    #[test]
    fn outer_strong_and_moderate_examples() {
        let r = outer_region(&params(1.0, 1.0)).unwrap();
        assert!((r.max_sum_rate() - 1.0).abs() < 1e-12);
        let r = outer_region(&params(0.5, 0.5)).unwrap();
        assert!(r
            .halfspaces
            .iter()
            .any(|h| h.a1 == 1.0 && h.a2 == 1.0 && (h.b - 1.0).abs() < 1e-12));
        assert!(r
            .halfspaces
            .iter()
            .any(|h| h.a1 == 1.0 && h.a2 == 1.0 && (h.b - 0.75).abs() < 1e-12));
        assert!((r.max_symmetric_sum() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn weak_at_zero_cross_is_square() {
        let r = outer_region(&params(0.7, 0.0)).unwrap();
        assert!(same_vertex_set(
            &r.vertices,
            &[
                (0.0, 0.0).into(),
                (0.7, 0.0).into(),
                (0.7, 0.7).into(),
                (0.0, 0.7).into()
            ],
            1e-12
        ));
    }

    #[test]
    fn mac_examples() {
        let m = mac_region(&params(1.0, 1.0), 1).unwrap();
        assert!((m.max_sum_rate() - 1.0).abs() < 1e-12);
        let m = mac_region(&params(0.5, 0.5), 1).unwrap();
        assert!((m.max_sum_rate() - 0.75).abs() < 1e-12);
        let m = mac_region(&params(1.0, 0.4), 1).unwrap();
        assert!(has_vertex(&m, (1.0, 0.0)) && has_vertex(&m, (0.6, 0.4)) && has_vertex(&m, (0.0, 0.4)));
        let m2 = mac_region(&params(1.0, 0.4), 2).unwrap();
        assert!(m2.same_as(&m.swapped(), 1e-12));
        assert!(mac_region(&params(1.0, 0.4), 3).is_err());
    }

    #[test]
    fn corner_point_examples() {
        let c = corner_points(&params(1.0, 0.4));
        assert!(c.iter().any(|p| p.dist(&(0.6, 0.6).into()) < 1e-12));
        assert!(c.iter().any(|p| p.dist(&(1.0, 0.0).into()) < 1e-12));
        let c = corner_points(&params(0.5, 0.1));
        assert!(c.iter().any(|p| p.dist(&(0.45, 0.45).into()) < 1e-12));
        assert!(c.iter().any(|p| p.dist(&(0.5, 0.05).into()) < 1e-12));
        assert_eq!(corner_points(&params(1.0, 1.0))[5], RatePair::ORIGIN);
        let hull = convex_hull(&corner_points(&params(1.0, 0.4)));
        assert!(same_vertex_set(
            &hull,
            &[
                (0.0, 0.0).into(),
                (1.0, 0.0).into(),
                (0.6, 0.6).into(),
                (0.0, 1.0).into()
            ],
            1e-12
        ));
    }

    #[test]
    fn inner_matches_outer_in_weak_and_strong() {
        let p = params(1.0, 0.4);
        let inner = inner_region(&p).unwrap();
        assert!(inner.same_as(&outer_region(&p).unwrap(), 1e-9));
        assert!(inner.same_as(&RateRegion::from_points(&corner_points(&p)), 1e-9));
        let p = params(0.5, 0.6);
        let inner = inner_region(&p).unwrap();
        assert!(inner.same_as(&outer_region(&p).unwrap(), 1e-9));
        assert!((inner.max_sum_rate() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn moderate_inner_strictly_inside() {
        let p = params(1.0, 0.6);
        let inner = inner_region(&p).unwrap();
        let outer = outer_region(&p).unwrap();
        assert!(inner.contains(&RatePair::new(0.55, 0.55), 1e-9));
        assert!(inner.is_subset_of(&outer, 1e-9));
        assert!(region_gap(&inner, &outer).unwrap() > 0.0);
    }

    #[test]
    fn gap_of_identical_regions_is_zero() {
        let r = outer_region(&params(0.8, 0.2)).unwrap();
        assert_eq!(region_gap(&r, &r).unwrap(), 0.0);
        let p = params(1.0, 0.4);
        assert!(region_gap(&inner_region(&p).unwrap(), &outer_region(&p).unwrap()).unwrap() <= 1e-9);
    }

    #[test]
    fn gap_reports_inclusion_violation() {
        let big = outer_region(&params(1.0, 0.0)).unwrap();
        let small = outer_region(&params(1.0, 0.4)).unwrap();
        assert!(matches!(region_gap(&big, &small), Err(Error::InclusionViolated { .. })));
    }

    #[test]
    fn capacity_is_not_monotone_in_cross_probability() {
        let a = inner_region(&params(0.5, 0.5)).unwrap();
        let b = inner_region(&params(0.5, 0.1)).unwrap();
        assert!(!a.is_subset_of(&b, 1e-9));
        assert!(!b.is_subset_of(&a, 1e-9));
    }

    #[test]
    fn region_doc_json_shape() {
        let p = params(1.0, 0.4);
        let doc = RegionDoc::new(&p, Regime::Weak, &outer_region(&p).unwrap());
        let v: serde_json::Value = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["regime"], "weak");
        assert_eq!(v["params"]["p_d"], 1.0);
        assert!(v["halfspaces"][0]["a1"].is_number());
        assert!(v["vertices"][0].is_array());
    }
}

//! Closed forms of the modified Han-Kobayashi (HK) scheme.
//!
//! A uniform input bit is split as `X = max(X_c, X_p)` with
//! `X_c ~ B(delta/2)` and `X_p ~ B(1 - 1/(2 - delta))`. The private portion
//! `H(X | X_c)` is [`c_delta`]. Two layouts of the per-slot codebooks are
//! modelled, selected by the time-sharing variable `Q`:
//!
//! - [`HkLayout::Swap`]: both users split; on `Q = 2` they exchange
//!   `delta1` and `delta2`. The M-terms of [`m_terms`] and the sum-rate of
//!   [`hk_sum_rate`] refer to this layout.
//! - [`HkLayout::TimeShared`]: on `Q = 1` user 1 splits with `delta1` while
//!   user 2 sends only a uniform common bit; on `Q = 2` the roles swap. The
//!   virtual-MAC terms of [`virtual_mac_terms`] refer to this layout.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::regions::{self, Halfspace, Regime};

const NEG_CLAMP: f64 = 1e-12;

/// Binary entropy in bits, `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binary entropy argument {p} outside [0, 1]")));
    }
    Ok(h2(p))
}

#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

fn check_unit(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::Domain(format!("{name} = {x} outside [0, 1]")))
    }
}

/// `C_delta = ((2 - delta)/2) H(1/(2 - delta))`, strictly decreasing from 1 to 0.
pub fn c_delta(delta: f64) -> Result<f64> {
    check_unit("delta", delta)?;
    Ok(c_delta_unchecked(delta))
}

#[inline]
fn c_delta_unchecked(delta: f64) -> f64 {
    let w = 2.0 - delta;
    0.5 * w * h2(1.0 / w)
}

/// Inverse of [`c_delta`] by bisection.
pub fn delta_from_c(c: f64) -> Result<f64> {
    check_unit("c", c)?;
    if c == 1.0 {
        return Ok(0.0);
    }
    if c == 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if c_delta_unchecked(mid) > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = if (c_delta_unchecked(lo) - c).abs() <= (c_delta_unchecked(hi) - c).abs() {
        lo
    } else {
        hi
    };
    let residual = (c_delta_unchecked(best) - c).abs();
    if residual > 1e-12 {
        return Err(Error::Consistency(format!("bisection residual {residual} for c = {c}")));
    }
    Ok(best)
}

/// Bernoulli parameter of the private codebook, `1 - 1/(2 - delta)`.
pub fn private_bias(delta: f64) -> f64 {
    1.0 - 1.0 / (2.0 - delta)
}

/// Bernoulli parameter of the common codebook, `delta/2`.
pub fn common_bias(delta: f64) -> f64 {
    0.5 * delta
}

/// Splitting parameters and time-sharing weights `Pr(Q = 1) = lambda1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitParams {
    pub delta1: f64,
    pub delta2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SplitParams {
    pub fn new(delta1: f64, delta2: f64, lambda1: f64) -> Result<Self> {
        check_unit("delta1", delta1)?;
        check_unit("delta2", delta2)?;
        check_unit("lambda1", lambda1)?;
        Ok(Self {
            delta1,
            delta2,
            lambda1,
            lambda2: 1.0 - lambda1,
        })
    }

    /// Equal time-sharing, `lambda1 = lambda2 = 1/2`.
    pub fn symmetric(delta1: f64, delta2: f64) -> Result<Self> {
        Self::new(delta1, delta2, 0.5)
    }

    pub fn is_symmetric(&self) -> bool {
        self.lambda1 == 0.5 && self.lambda2 == 0.5
    }

    pub fn c1(&self) -> f64 {
        c_delta_unchecked(self.delta1)
    }

    pub fn c2(&self) -> f64 {
        c_delta_unchecked(self.delta2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HkLayout {
    Swap,
    TimeShared,
}

/// `gamma = H(X1 xor X2 | X1c, X2c, Q)`.
pub fn gamma(split: &SplitParams) -> f64 {
    gamma_with(split, split.c1(), split.c2())
}

fn gamma_with(split: &SplitParams, c1: f64, c2: f64) -> f64 {
    let (d1, d2) = (split.delta1, split.delta2);
    let p_star = (2.0 - d2 - d1) / ((2.0 - d1) * (2.0 - d2));
    0.5 * d1 * c2 + 0.5 * d2 * c1 + 0.25 * (2.0 - d1) * (2.0 - d2) * h2(p_star)
}

/// Receiver-1 mutual informations of the swap layout:
///
/// - `m_c1 = I(X1c, X2c; Y1 | Q, G)`
/// - `m_c2 = I(X2c; Y1 | X1c, Q, G)`
/// - `m_p  = I(X1p; Y1 | X1c, X2c, Q, G)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MTerms {
    pub m_c1: f64,
    pub m_c2: f64,
    pub m_p: f64,
}

/// M-terms for arbitrary time-sharing weights.
///
/// With `h1 = H(X1 | X1c, Q) = l1 C1 + l2 C2` and `h2 = H(X2 | X2c, Q) =
/// l1 C2 + l2 C1`:
///
/// ```text
/// m_c1 = (p_d + p_c - p_d p_c) - p_d q_c h1 - q_d p_c h2 - p_d p_c gamma
/// m_c2 = p_c - q_d p_c h2 - p_d p_c gamma
/// m_p  = p_d q_c h1 + p_d p_c gamma - p_d p_c h2
/// ```
///
/// At `l1 = l2 = 1/2` these reduce to the familiar symmetric forms in
/// `(C1 + C2)/2`. Note the `- p_d p_c gamma` in `m_c2`: the chain rule
/// `m_c2 = m_c1 - I(X1c; Y1 | Q, G)` fixes that sign.
pub fn m_terms(params: &ChannelParams, split: &SplitParams) -> MTerms {
    let (c1, c2) = (split.c1(), split.c2());
    m_terms_with(params, split, c1, c2, gamma_with(split, c1, c2))
}

fn m_terms_with(params: &ChannelParams, split: &SplitParams, c1: f64, c2: f64, g: f64) -> MTerms {
    let (pd, pc, qd, qc) = (params.p_d(), params.p_c(), params.q_d(), params.q_c());
    let h_1 = split.lambda1 * c1 + split.lambda2 * c2;
    let h_2 = split.lambda1 * c2 + split.lambda2 * c1;
    MTerms {
        m_c1: params.union_prob() - pd * qc * h_1 - qd * pc * h_2 - pd * pc * g,
        m_c2: pc - qd * pc * h_2 - pd * pc * g,
        m_p: pd * qc * h_1 + pd * pc * g - pd * pc * h_2,
    }
}

/// Everything derived from one symmetric-weight split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HkEvaluation {
    pub split: SplitParams,
    pub c_delta1: f64,
    pub c_delta2: f64,
    pub gamma: f64,
    pub m_p: f64,
    pub m_c1: f64,
    pub m_c2: f64,
    pub r_sum: f64,
}

fn clamp_nonneg(name: &str, x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -NEG_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("{name} = {x} is negative")))
    }
}

pub fn evaluate(params: &ChannelParams, split: &SplitParams) -> Result<HkEvaluation> {
    if !split.is_symmetric() {
        return Err(Error::Domain(
            "the HK sum-rate form assumes lambda1 = lambda2 = 1/2".into(),
        ));
    }
    let (c1, c2) = (split.c1(), split.c2());
    let g = gamma_with(split, c1, c2);
    let m = m_terms_with(params, split, c1, c2, g);
    let m_p = clamp_nonneg("m_p", m.m_p)?;
    let m_c1 = clamp_nonneg("m_c1", m.m_c1)?;
    let m_c2 = clamp_nonneg("m_c2", m.m_c2)?;
    let r_sum = clamp_nonneg("r_sum", 2.0 * m_p + m_c1.min(2.0 * m_c2))?;
    Ok(HkEvaluation {
        split: *split,
        c_delta1: c1,
        c_delta2: c2,
        gamma: g,
        m_p,
        m_c1,
        m_c2,
        r_sum,
    })
}

/// `R_sum = 2 m_p + min(m_c1, 2 m_c2)` for the swap layout at equal weights.
pub fn hk_sum_rate(params: &ChannelParams, split: &SplitParams) -> Result<f64> {
    evaluate(params, split).map(|e| e.r_sum)
}

/// Optimal private portion in the moderate regime:
/// `(p_d p_c - (p_d - p_c)) / (p_d p_c - (p_d - p_c)/2)`.
pub fn c_star(params: &ChannelParams) -> f64 {
    let (pd, pc) = (params.p_d(), params.p_c());
    let num = pd * pc - (pd - pc);
    let den = pd * pc - 0.5 * (pd - pc);
    (num / den).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalSumRate {
    pub r_sum: f64,
    pub c_star: f64,
}

/// Best HK sum-rate over `(delta1, delta2)` for `p_c <= p_d`.
pub fn optimal_sum_rate(params: &ChannelParams) -> Result<OptimalSumRate> {
    let (pd, pc) = (params.p_d(), params.p_c());
    if pc > pd {
        return Err(Error::RegimeMismatch(format!(
            "HK optimum covers p_c <= p_d only (p_d = {pd}, p_c = {pc})"
        )));
    }
    if pd == 0.0 || pc <= pd / (1.0 + pd) {
        return Ok(OptimalSumRate {
            r_sum: 2.0 * pd * params.q_c(),
            c_star: 0.0,
        });
    }
    let c = c_star(params);
    Ok(OptimalSumRate {
        r_sum: params.union_prob() + 0.5 * (pd - pc) * c,
        c_star: c,
    })
}

/// Achievable symmetric sum-rate: treat-as-erasure, HK, or interference
/// decoding according to the regime. In the strong regime the sum bound is
/// capped by the single-user bounds once `p_c > p_d / (1 - p_d)`.
pub fn symmetric_sum_rate(params: &ChannelParams) -> Result<f64> {
    let regime = regions::classify_regime(params)?;
    Ok(match regime {
        Regime::Weak => 2.0 * params.p_d() * params.q_c(),
        Regime::Moderate => optimal_sum_rate(params)?.r_sum,
        Regime::Strong => params.union_prob().min(2.0 * params.p_d()),
    })
}

/// The six virtual-MAC mutual informations of the time-shared layout.
///
/// Field `rxJ_..` is evaluated at receiver `J`; `given_other` means
/// conditioning on the other user's common bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualMacTerms {
    /// `I(X1c, X2c; Y1 | Q, G)`
    pub rx1_sum: f64,
    /// `I(X2c; Y1 | X1c, Q, G)`
    pub rx1_user2: f64,
    /// `I(X1c; Y1 | X2c, Q, G)`
    pub rx1_user1: f64,
    /// `I(X1c, X2c; Y2 | Q, G)`
    pub rx2_sum: f64,
    /// `I(X2c; Y2 | X1c, Q, G)`
    pub rx2_user2: f64,
    /// `I(X1c; Y2 | X2c, Q, G)`
    pub rx2_user1: f64,
    /// `I(X1p; Y1 | X1c, X2c, Q, G)`
    pub private1: f64,
    /// `I(X2p; Y2 | X1c, X2c, Q, G)`
    pub private2: f64,
}

pub fn virtual_mac_terms(params: &ChannelParams, split: &SplitParams) -> VirtualMacTerms {
    let (pd, pc) = (params.p_d(), params.p_c());
    let s = params.union_prob();
    let a = split.lambda1 * split.c1();
    let b = split.lambda2 * split.c2();
    VirtualMacTerms {
        rx1_sum: s - a * pd - b * pc,
        rx1_user2: pc - b * pc - a * pd * pc,
        rx1_user1: pd - a * pd - b * pc * pd,
        rx2_sum: s - a * pc - b * pd,
        rx2_user2: pd - b * pd - a * pc * pd,
        rx2_user1: pc - a * pc - b * pc * pd,
        private1: a * pd,
        private2: b * pd,
    }
}

/// Common-rate region of the time-shared layout plus private-rate caps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsConstraints {
    /// Halfspaces over `(R1c, R2c)`: single-user bound for user 1, for user 2,
    /// then the sum bound.
    pub common: [Halfspace; 3],
    /// `(R1p, R2p)` caps `(l1 p_d C1, l2 p_d C2)`.
    pub private_caps: (f64, f64),
}

/// Common-message constraints, written for `p_c <= p_d` where the
/// cross-receiver single-user bounds are the binding ones.
pub fn ts_common_constraints(params: &ChannelParams, split: &SplitParams) -> TsConstraints {
    let (pd, pc) = (params.p_d(), params.p_c());
    let a = split.lambda1 * split.c1();
    let b = split.lambda2 * split.c2();
    TsConstraints {
        common: [
            Halfspace::new(1.0, 0.0, pc - a * pc - b * pc * pd),
            Halfspace::new(0.0, 1.0, pc - b * pc - a * pd * pc),
            Halfspace::new(1.0, 1.0, params.union_prob() - (a * pd + b * pc).max(a * pc + b * pd)),
        ],
        private_caps: (a * pd, b * pd),
    }
}

/// Sum-rate of the time-shared layout at `l1 = l2 = 1/2`, `C1 = C2 = c`.
pub fn ts_sum_rate(params: &ChannelParams, c: f64) -> Result<f64> {
    check_unit("c", c)?;
    let (pd, pc) = (params.p_d(), params.p_c());
    let common = (params.union_prob() - 0.5 * (pd + pc) * c).min(2.0 * pc - (pc + pc * pd) * c);
    Ok(pd * c + common)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub p_c: f64,
    pub regime: Regime,
    pub inner_sum: f64,
    pub outer_sum: f64,
    pub c_star: f64,
}

/// Inner symmetric sum-rate against the outer bound's symmetric sum along a
/// grid of cross-link probabilities.
pub fn sum_rate_curve(p_d: f64, p_c_grid: &[f64]) -> Result<Vec<CurveRow>> {
    p_c_grid
        .iter()
        .map(|&pc| {
            let params = ChannelParams::new(p_d, pc)?;
            let regime = regions::classify_regime(&params)?;
            let outer = regions::outer_region(&params)?;
            Ok(CurveRow {
                p_c: pc,
                regime,
                inner_sum: symmetric_sum_rate(&params)?,
                outer_sum: outer.max_symmetric_sum(),
                c_star: if regime == Regime::Moderate {
                    c_star(&params)
                } else {
                    0.0
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pd: f64, pc: f64) -> ChannelParams {
        ChannelParams::new(pd, pc).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(close(
            binary_entropy(2.0 / 3.0).unwrap(),
            0.918_295_834_054_489_6,
            1e-15
        ));
        assert!(binary_entropy(1.01).is_err());
        assert!(binary_entropy(-0.01).is_err());
    }

    #[test]
    fn c_delta_values() {
        assert_eq!(c_delta(0.0).unwrap(), 1.0);
        assert_eq!(c_delta(1.0).unwrap(), 0.0);
        assert!(close(c_delta(0.5).unwrap(), 0.75 * 0.918_295_834_054_489_6, 1e-15));
        assert!(close(c_delta(0.5).unwrap(), 0.688_721_875, 1e-9));
        assert!(c_delta(1.2).is_err());
    }

    #[test]
    fn c_delta_strictly_decreasing() {
        let vals: Vec<f64> = (0..=1000).map(|i| c_delta(i as f64 / 1000.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn delta_from_c_inverts() {
        assert_eq!(delta_from_c(1.0).unwrap(), 0.0);
        assert_eq!(delta_from_c(0.0).unwrap(), 1.0);
        let c = c_delta(0.3).unwrap();
        assert!(close(delta_from_c(c).unwrap(), 0.3, 1e-10));
        let d = delta_from_c(0.5).unwrap();
        assert!(close(c_delta(d).unwrap(), 0.5, 1e-12));
        assert!(delta_from_c(-0.1).is_err());
    }

    #[test]
    fn gamma_examples() {
        for d1 in [0.0, 0.2, 0.7, 1.0] {
            let s = SplitParams::symmetric(d1, 1.0).unwrap();
            assert!(close(gamma(&s), s.c1(), 1e-15));
        }
        assert!(close(gamma(&SplitParams::symmetric(0.0, 0.0).unwrap()), 1.0, 1e-15));
        for i in 0..50 {
            for j in 0..50 {
                let s = SplitParams::symmetric(i as f64 / 49.0, j as f64 / 49.0).unwrap();
                assert!(gamma(&s) <= s.c1() + s.c2() + 1e-12);
                assert!(gamma(&s) >= 0.0);
            }
        }
    }

    #[test]
    fn m_terms_limits() {
        let p = params(0.7, 0.4);
        let all_common = m_terms(&p, &SplitParams::symmetric(1.0, 1.0).unwrap());
        assert!(close(all_common.m_c1, p.union_prob(), 1e-15));
        assert!(close(all_common.m_p, 0.0, 1e-15));
        let all_private = m_terms(&p, &SplitParams::symmetric(0.0, 0.0).unwrap());
        assert!(close(all_private.m_p, p.p_d() * p.q_c(), 1e-15));
        assert!(close(all_private.m_c2, 0.0, 1e-15));
    }

    #[test]
    fn hk_sum_rate_examples() {
        let p = params(1.0, 0.6);
        let d1 = delta_from_c(0.5).unwrap();
        let r = hk_sum_rate(&p, &SplitParams::symmetric(d1, 1.0).unwrap()).unwrap();
        assert!(close(r, 1.1, 1e-12));
        let ones = SplitParams::symmetric(1.0, 1.0).unwrap();
        assert!(close(hk_sum_rate(&params(1.0, 1.0), &ones).unwrap(), 1.0, 1e-15));
        let zeros = SplitParams::symmetric(0.0, 0.0).unwrap();
        assert!(close(hk_sum_rate(&params(1.0, 0.4), &zeros).unwrap(), 1.2, 1e-15));
        let lopsided = SplitParams::new(0.5, 0.5, 0.3).unwrap();
        assert!(hk_sum_rate(&p, &lopsided).is_err());
    }

    #[test]
    fn optimal_sum_rate_examples() {
        let o = optimal_sum_rate(&params(1.0, 0.6)).unwrap();
        assert!(close(o.c_star, 0.5, 1e-15));
        assert!(close(o.r_sum, 1.1, 1e-15));
        let o = optimal_sum_rate(&params(1.0, 0.5)).unwrap();
        assert_eq!(o.c_star, 0.0);
        assert!(close(o.r_sum, 1.0, 1e-15));
        let o = optimal_sum_rate(&params(0.7, 0.7)).unwrap();
        assert!(close(o.c_star, 1.0, 1e-15));
        assert!(close(o.r_sum, 2.0 * 0.7 - 0.49, 1e-15));
        assert!(optimal_sum_rate(&params(0.5, 0.6)).is_err());
        let o = optimal_sum_rate(&params(0.8, 0.0)).unwrap();
        assert_eq!((o.r_sum, o.c_star), (1.6, 0.0));
    }

    #[test]
    fn symmetric_sum_rate_examples() {
        assert!(close(symmetric_sum_rate(&params(0.6, 0.0)).unwrap(), 1.2, 1e-15));
        assert!(close(symmetric_sum_rate(&params(1.0, 1.0)).unwrap(), 1.0, 1e-15));
        assert!(close(symmetric_sum_rate(&params(0.1, 0.9)).unwrap(), 0.2, 1e-15));
        let r = symmetric_sum_rate(&params(1.0, 0.6)).unwrap();
        assert!(close(r, 1.1, 1e-12));
        assert!(r > 1.0);
        assert!(matches!(
            symmetric_sum_rate(&params(0.0, 0.5)),
            Err(Error::DegenerateChannel)
        ));
    }

    #[test]
    fn ts_constraint_examples() {
        let p = params(0.9, 0.6);
        let none = ts_common_constraints(&p, &SplitParams::symmetric(1.0, 1.0).unwrap());
        assert!(close(none.common[0].b, 0.6, 1e-15));
        assert!(close(none.common[1].b, 0.6, 1e-15));
        assert!(close(none.common[2].b, p.union_prob(), 1e-15));
        assert_eq!(none.private_caps, (0.0, 0.0));

        let s = SplitParams::symmetric(0.4, 0.4).unwrap();
        let c = s.c1();
        let t = ts_common_constraints(&p, &s);
        assert!(close(t.common[2].b, p.union_prob() - c * (0.9 + 0.6) / 2.0, 1e-15));
    }

    #[test]
    fn ts_sum_rate_examples() {
        let p = params(0.8, 0.5);
        assert!(close(ts_sum_rate(&p, 0.0).unwrap(), p.union_prob().min(1.0), 1e-15));
        let p = params(1.0, 0.6);
        let best = (0..=10_000)
            .map(|i| ts_sum_rate(&p, i as f64 / 10_000.0).unwrap())
            .fold(f64::MIN, f64::max);
        assert!(close(best, 1.1, 1e-12));
        let o = optimal_sum_rate(&p).unwrap();
        assert!(close(ts_sum_rate(&p, o.c_star).unwrap(), o.r_sum, 1e-12));
        assert!(ts_sum_rate(&p, 1.5).is_err());
    }

    #[test]
    fn curve_examples() {
        let rows = sum_rate_curve(1.0, &[0.0, 0.5, 0.6]).unwrap();
        assert!(close(rows[0].inner_sum, 2.0, 1e-12) && close(rows[0].outer_sum, 2.0, 1e-12));
        assert!(close(rows[1].inner_sum, 1.0, 1e-12) && close(rows[1].outer_sum, 1.0, 1e-12));
        assert!(close(rows[2].inner_sum, 1.1, 1e-12) && close(rows[2].outer_sum, 1.2, 1e-12));
        assert_eq!(rows[2].regime, Regime::Moderate);
    }
}

//! Enumeration of the HK codebook distribution and comparison against the
//! closed forms in [`crate::hk`].

use super::{FinitePmf, IdentityCheck, VerificationReport};
use crate::channel::{transmit, ChannelParams, ChannelState};
use crate::error::Result;
use crate::hk::{self, common_bias, private_bias, HkLayout, SplitParams};

/// Variable order of [`hk_joint_pmf`]. `S` is `X1 xor X2`.
pub const HK_VARS: [&str; 14] = [
    "Q", "G11", "G21", "G22", "G12", "X1c", "X1p", "X2c", "X2p", "X1", "X2", "S", "Y1", "Y2",
];

const G: [&str; 4] = ["G11", "G21", "G22", "G12"];

fn bern(bit: u32, p: f64) -> f64 {
    if bit == 1 {
        p
    } else {
        1.0 - p
    }
}

/// Codebook biases `(X1c, X1p, X2c, X2p)` for time-sharing slot `q`.
fn biases(layout: HkLayout, split: &SplitParams, q: u32) -> [f64; 4] {
    let (d1, d2) = (split.delta1, split.delta2);
    match (layout, q) {
        (HkLayout::Swap, 1) => [common_bias(d1), private_bias(d1), common_bias(d2), private_bias(d2)],
        (HkLayout::Swap, _) => [common_bias(d2), private_bias(d2), common_bias(d1), private_bias(d1)],
        (HkLayout::TimeShared, 1) => [common_bias(d1), private_bias(d1), 0.5, 0.0],
        (HkLayout::TimeShared, _) => [0.5, 0.0, common_bias(d2), private_bias(d2)],
    }
}

/// Exact joint law of time-sharing index, gains, codebook bits and outputs.
pub fn hk_joint_pmf(params: &ChannelParams, split: &SplitParams, layout: HkLayout) -> Result<FinitePmf> {
    let mut atoms = Vec::with_capacity(2 * 16 * 16);
    for q in [1u32, 2] {
        let pq = if q == 1 { split.lambda1 } else { split.lambda2 };
        let b = biases(layout, split, q);
        for state in ChannelState::all() {
            let ps = state.probability(params);
            for bits in 0u32..16 {
                let (x1c, x1p, x2c, x2p) = (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1);
                let px = bern(x1c, b[0]) * bern(x1p, b[1]) * bern(x2c, b[2]) * bern(x2p, b[3]);
                let x1 = x1c.max(x1p);
                let x2 = x2c.max(x2p);
                let (y1, y2) = transmit(x1 == 1, x2 == 1, &state);
                atoms.push((
                    vec![
                        q,
                        state.g11 as u32,
                        state.g21 as u32,
                        state.g22 as u32,
                        state.g12 as u32,
                        x1c,
                        x1p,
                        x2c,
                        x2p,
                        x1,
                        x2,
                        x1 ^ x2,
                        y1 as u32,
                        y2 as u32,
                    ],
                    pq * ps * px,
                ));
            }
        }
    }
    FinitePmf::from_atoms(&HK_VARS, atoms)
}

fn with_g<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    extra.iter().copied().chain(G).collect()
}

/// Compares every HK closed form against exact enumeration.
///
/// Swap layout: `H(X1 | X1c, Q)`, `gamma`, and the three M-terms (for any
/// weights), plus the equal-weight `(C1 + C2)/2` forms when the split has
/// `l1 = l2 = 1/2`. Time-shared layout: the six virtual-MAC terms, both
/// private-rate terms and, when `p_c <= p_d`, the three common-rate
/// constraints.
pub fn verify_hk_closed_forms(params: &ChannelParams, split: &SplitParams) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let tag = format!(
        "(p_d={}, p_c={}, delta=({}, {}), lambda=({}, {}))",
        params.p_d(),
        params.p_c(),
        split.delta1,
        split.delta2,
        split.lambda1,
        split.lambda2
    );
    let (pd, pc) = (params.p_d(), params.p_c());

    let swap = hk_joint_pmf(params, split, HkLayout::Swap)?;
    let (c1, c2) = (split.c1(), split.c2());
    report.push(IdentityCheck::equality(
        format!("H(X1|X1c,Q) {tag}"),
        swap.conditional_entropy(&["X1"], &["X1c", "Q"])?,
        split.lambda1 * c1 + split.lambda2 * c2,
    ));
    let gamma_oracle = swap.conditional_entropy(&["S"], &["X1c", "X2c", "Q"])?;
    report.push(IdentityCheck::equality(
        format!("gamma {tag}"),
        gamma_oracle,
        hk::gamma(split),
    ));
    report.push(IdentityCheck::at_most(
        format!("gamma <= C1 + C2 {tag}"),
        gamma_oracle,
        c1 + c2,
    ));

    let m_c1 = swap.mutual_information(&["X1c", "X2c"], &["Y1"], &with_g(&["Q"]))?;
    let m_c2 = swap.mutual_information(&["X2c"], &["Y1"], &with_g(&["X1c", "Q"]))?;
    let m_p = swap.mutual_information(&["X1p"], &["Y1"], &with_g(&["X1c", "X2c", "Q"]))?;
    let closed = hk::m_terms(params, split);
    report.push(IdentityCheck::equality(format!("M_c1 {tag}"), m_c1, closed.m_c1));
    report.push(IdentityCheck::equality(format!("M_c2 {tag}"), m_c2, closed.m_c2));
    report.push(IdentityCheck::equality(format!("M_p {tag}"), m_p, closed.m_p));

    if split.is_symmetric() {
        let avg = 0.5 * (c1 + c2);
        let g = hk::gamma(split);
        let s = params.union_prob();
        report.push(IdentityCheck::equality(
            format!("M_c1 equal-weight form {tag}"),
            m_c1,
            s - (pd + pc - 2.0 * pc * pd) * avg - pd * pc * g,
        ));
        report.push(IdentityCheck::equality(
            format!("M_c2 equal-weight form {tag}"),
            m_c2,
            pc - (pc - pc * pd) * avg - pd * pc * g,
        ));
        report.push(IdentityCheck::equality(
            format!("M_p equal-weight form {tag}"),
            m_p,
            (pd - 2.0 * pc * pd) * avg + pd * pc * g,
        ));
    }

    let ts = hk_joint_pmf(params, split, HkLayout::TimeShared)?;
    let vm = hk::virtual_mac_terms(params, split);
    let mi = |a: &[&str], y: &str, given: &[&str]| ts.mutual_information(a, &[y], &with_g(given));
    let rx1_sum = mi(&["X1c", "X2c"], "Y1", &["Q"])?;
    let rx1_user2 = mi(&["X2c"], "Y1", &["X1c", "Q"])?;
    let rx1_user1 = mi(&["X1c"], "Y1", &["X2c", "Q"])?;
    let rx2_sum = mi(&["X1c", "X2c"], "Y2", &["Q"])?;
    let rx2_user2 = mi(&["X2c"], "Y2", &["X1c", "Q"])?;
    let rx2_user1 = mi(&["X1c"], "Y2", &["X2c", "Q"])?;
    let private1 = mi(&["X1p"], "Y1", &["X1c", "X2c", "Q"])?;
    let private2 = mi(&["X2p"], "Y2", &["X1c", "X2c", "Q"])?;
    for (name, lhs, rhs) in [
        ("I(X1c,X2c;Y1|Q,G)", rx1_sum, vm.rx1_sum),
        ("I(X2c;Y1|X1c,Q,G)", rx1_user2, vm.rx1_user2),
        ("I(X1c;Y1|X2c,Q,G)", rx1_user1, vm.rx1_user1),
        ("I(X1c,X2c;Y2|Q,G)", rx2_sum, vm.rx2_sum),
        ("I(X2c;Y2|X1c,Q,G)", rx2_user2, vm.rx2_user2),
        ("I(X1c;Y2|X2c,Q,G)", rx2_user1, vm.rx2_user1),
        ("I(X1p;Y1|X1c,X2c,Q,G)", private1, vm.private1),
        ("I(X2p;Y2|X1c,X2c,Q,G)", private2, vm.private2),
    ] {
        report.push(IdentityCheck::equality(format!("{name} time-shared {tag}"), lhs, rhs));
    }

    if pc <= pd {
        let ts_bounds = hk::ts_common_constraints(params, split);
        report.push(IdentityCheck::equality(
            format!("R1c bound {tag}"),
            rx1_user1.min(rx2_user1),
            ts_bounds.common[0].b,
        ));
        report.push(IdentityCheck::equality(
            format!("R2c bound {tag}"),
            rx1_user2.min(rx2_user2),
            ts_bounds.common[1].b,
        ));
        report.push(IdentityCheck::equality(
            format!("R1c+R2c bound {tag}"),
            rx1_sum.min(rx2_sum),
            ts_bounds.common[2].b,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pd: f64, pc: f64) -> ChannelParams {
        ChannelParams::new(pd, pc).unwrap()
    }

    #[test]
    fn all_common_and_all_private_limits() {
        let p = params(0.8, 0.5);
        let pmf = hk_joint_pmf(&p, &SplitParams::symmetric(1.0, 1.0).unwrap(), HkLayout::Swap).unwrap();
        assert_eq!(pmf.prob("X1p", 1).unwrap(), 0.0);
        assert!(pmf.conditional_entropy(&["X1"], &["X1c", "Q"]).unwrap().abs() < 1e-15);

        let pmf = hk_joint_pmf(&p, &SplitParams::symmetric(0.0, 0.0).unwrap(), HkLayout::Swap).unwrap();
        assert_eq!(pmf.prob("X1c", 1).unwrap(), 0.0);
        assert!((pmf.conditional_entropy(&["X1"], &["X1c", "Q"]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn per_slot_marginals_follow_the_codebook_table() {
        let p = params(0.7, 0.4);
        let split = SplitParams::new(0.3, 0.8, 0.25).unwrap();
        let pmf = hk_joint_pmf(&p, &split, HkLayout::Swap).unwrap();
        for q in [1u32, 2] {
            let pq = if q == 1 { 0.25 } else { 0.75 };
            let (da, db) = if q == 1 { (0.3, 0.8) } else { (0.8, 0.3) };
            for (var, want) in [
                ("X1c", da / 2.0),
                ("X1p", 1.0 - 1.0 / (2.0 - da)),
                ("X2c", db / 2.0),
                ("X2p", 1.0 - 1.0 / (2.0 - db)),
            ] {
                let joint = pmf.marginal(&["Q", var]).unwrap();
                let got = joint.get(&vec![q, 1]).copied().unwrap_or(0.0) / pq;
                assert!((got - want).abs() <= 1e-15, "{var} at Q={q}: {got} vs {want}");
            }
        }
        assert!((pmf.prob("X1", 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((pmf.prob("G21", 1).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn moderate_example_passes() {
        let split = SplitParams::symmetric(0.5, 1.0).unwrap();
        let report = verify_hk_closed_forms(&params(1.0, 0.6), &split).unwrap();
        for c in &report.checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn all_common_private_term_is_exactly_zero() {
        let split = SplitParams::symmetric(1.0, 1.0).unwrap();
        let report = verify_hk_closed_forms(&params(0.9, 0.7), &split).unwrap();
        let mp = report.checks.iter().find(|c| c.identity.starts_with("M_p ")).unwrap();
        assert_eq!(mp.deviation, 0.0);
        assert!(report.all_pass());
    }

    #[test]
    fn unequal_weights_pass() {
        let split = SplitParams::new(0.25, 0.75, 0.3).unwrap();
        let report = verify_hk_closed_forms(&params(0.9, 0.5), &split).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().collect::<Vec<_>>());
    }
}

//! Exact Shannon quantities over small finite distributions.
//!
//! [`FinitePmf`] enumerates every atom of a joint law over named discrete
//! variables. Everything else in this module is built on it: the HK
//! closed-form check ([`verify_hk_closed_forms`]), the conditional entropy
//! leakage inequality ([`verify_leakage`]) and the independence of no-CSIT
//! codewords given the channel ([`verify_claim_independence`]).

mod claim;
mod hk_oracle;
mod leakage;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use claim::{
    claim_mutual_information, random_encoder_pair, verify_claim_independence, ClaimReport, EncoderCoupling,
    EncoderPair, CLAIM_MAX_N,
};
pub use hk_oracle::{hk_joint_pmf, verify_hk_closed_forms, HK_VARS};
pub use leakage::{
    deterministic_inputs, dirichlet_input, leakage_campaign, random_leakage_probs, verify_leakage, CampaignSummary,
    LeakageMode, LeakageOutcome, LeakageSetup, LEAKAGE_MAX_N,
};

/// Tolerance of every exact identity check.
pub const IDENTITY_TOL: f64 = 1e-12;

const SUM_TOL: f64 = 1e-12;

type Triple = (Vec<u32>, Vec<u32>, Vec<u32>);

/// Exact joint probability mass function over named discrete variables.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    vars: Vec<String>,
    atoms: Vec<(Vec<u32>, f64)>,
}

impl FinitePmf {
    /// Builds a pmf from possibly repeated outcomes; repeated tuples are merged
    /// and zero-probability atoms dropped.
    pub fn from_atoms<I>(vars: &[&str], atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (outcome, p) in atoms {
            if outcome.len() != vars.len() {
                return Err(Error::Domain(format!(
                    "outcome has {} values, expected {}",
                    outcome.len(),
                    vars.len()
                )));
            }
            if p.is_nan() || p < 0.0 {
                return Err(Error::Domain(format!("negative probability {p}")));
            }
            if p > 0.0 {
                *merged.entry(outcome).or_insert(0.0) += p;
            }
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let unique: std::collections::BTreeSet<&str> = vars.iter().copied().collect();
        if unique.len() != vars.len() {
            return Err(Error::Domain("duplicate variable names".into()));
        }
        Ok(Self {
            vars: names,
            atoms: merged.into_iter().collect(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.atoms.iter().map(|(o, p)| (o.as_slice(), *p))
    }

    fn indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(names.len());
        for name in names {
            let i = self
                .vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::VariableUnknown(name.to_string()))?;
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        Ok(idx)
    }

    /// Marginal law of `names`, keyed by the projected outcome.
    pub fn marginal(&self, names: &[&str]) -> Result<BTreeMap<Vec<u32>, f64>> {
        let idx = self.indices(names)?;
        let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (outcome, p) in &self.atoms {
            let key: Vec<u32> = idx.iter().map(|&i| outcome[i]).collect();
            *out.entry(key).or_insert(0.0) += p;
        }
        Ok(out)
    }

    /// `Pr(var = value)`.
    pub fn prob(&self, var: &str, value: u32) -> Result<f64> {
        Ok(self.marginal(&[var])?.get(&vec![value]).copied().unwrap_or(0.0))
    }

    /// Shannon entropy (bits) of the marginal over `names`.
    pub fn entropy(&self, names: &[&str]) -> Result<f64> {
        Ok(self
            .marginal(names)?
            .values()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum())
    }

    /// `H(target | given)`, summed as `-sum p(t, g) log(p(t, g) / p(g))` so
    /// that a target determined by `given` yields exactly zero.
    pub fn conditional_entropy(&self, target: &[&str], given: &[&str]) -> Result<f64> {
        let tg: Vec<&str> = target.iter().chain(given).copied().collect();
        let joint = self.marginal(&tg)?;
        let cond = self.marginal(given)?;
        let (it, ig) = (self.indices(target)?, self.indices(given)?);
        if it.iter().any(|i| ig.contains(i)) {
            return Err(Error::Domain("target and given variables overlap".into()));
        }
        let split = it.len();
        Ok(joint
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| -p * (p / cond[&k[split..]]).log2())
            .sum::<f64>()
            .max(0.0))
    }

    /// `I(a; b | given)`, summed term by term so that independent blocks
    /// yield exactly zero when the ratio is exact.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        let ia = self.indices(a)?;
        let ib = self.indices(b)?;
        let ig = self.indices(given)?;
        let mut abg: BTreeMap<Triple, f64> = BTreeMap::new();
        for (outcome, p) in &self.atoms {
            let pick = |idx: &[usize]| idx.iter().map(|&i| outcome[i]).collect::<Vec<u32>>();
            *abg.entry((pick(&ia), pick(&ib), pick(&ig))).or_insert(0.0) += p;
        }
        let mut ag: BTreeMap<(&[u32], &[u32]), f64> = BTreeMap::new();
        let mut bg: BTreeMap<(&[u32], &[u32]), f64> = BTreeMap::new();
        let mut g: BTreeMap<&[u32], f64> = BTreeMap::new();
        for ((ka, kb, kg), &p) in &abg {
            *ag.entry((ka, kg)).or_insert(0.0) += p;
            *bg.entry((kb, kg)).or_insert(0.0) += p;
            *g.entry(kg).or_insert(0.0) += p;
        }
        Ok(abg
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|((ka, kb, kg), &p)| {
                let ratio = (p * g[kg.as_slice()])
                    / (ag[&(ka.as_slice(), kg.as_slice())] * bg[&(kb.as_slice(), kg.as_slice())]);
                p * ratio.log2()
            })
            .sum())
    }
}

/// One checked identity: `lhs` from enumeration, `rhs` from a closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn equality(identity: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let deviation = (lhs - rhs).abs();
        Self {
            identity: identity.into(),
            lhs,
            rhs,
            deviation,
            pass: deviation <= IDENTITY_TOL,
        }
    }

    /// Passes when `lhs >= rhs - tol`; `deviation` is the shortfall.
    pub fn at_least(identity: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let deviation = (rhs - lhs).max(0.0);
        Self {
            identity: identity.into(),
            lhs,
            rhs,
            deviation,
            pass: deviation <= IDENTITY_TOL,
        }
    }

    /// Passes when `lhs > rhs`; used for negative controls that must be
    /// detected.
    pub fn exceeds(identity: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let deviation = (rhs - lhs).max(0.0);
        Self {
            identity: identity.into(),
            lhs,
            rhs,
            deviation,
            pass: lhs > rhs,
        }
    }

    /// Passes when `lhs <= rhs + tol`.
    pub fn at_most(identity: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let deviation = (lhs - rhs).max(0.0);
        Self {
            identity: identity.into(),
            lhs,
            rhs,
            deviation,
            pass: deviation <= IDENTITY_TOL,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<IdentityCheck>,
}

impl VerificationReport {
    pub fn push(&mut self, check: IdentityCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bernoulli(p: f64) -> FinitePmf {
        FinitePmf::from_atoms(&["A"], [(vec![0], 1.0 - p), (vec![1], p)]).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(bernoulli(0.5).entropy(&["A"]).unwrap(), 1.0);
        assert_eq!(bernoulli(1.0).entropy(&["A"]).unwrap(), 0.0);
        let h = bernoulli(1.0 / 3.0).entropy(&["A"]).unwrap();
        assert!((h - crate::hk::binary_entropy(1.0 / 3.0).unwrap()).abs() < 1e-15);
        assert!((h - 0.918_295_8).abs() < 1e-7);
    }

    #[test]
    fn unknown_variable() {
        assert_eq!(bernoulli(0.5).entropy(&["B"]), Err(Error::VariableUnknown("B".into())));
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(FinitePmf::from_atoms(&["A"], [(vec![0], 0.5)]).is_err());
        assert!(FinitePmf::from_atoms(&["A"], [(vec![0], 1.5), (vec![1], -0.5)]).is_err());
        assert!(FinitePmf::from_atoms(&["A", "A"], [(vec![0, 0], 1.0)]).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let indep = FinitePmf::from_atoms(&["A", "B"], (0..4u32).map(|i| (vec![i & 1, i >> 1], 0.25))).unwrap();
        assert!((indep.conditional_entropy(&["A"], &["B"]).unwrap() - 1.0).abs() < 1e-15);
        let func = FinitePmf::from_atoms(&["A", "B"], (0..4u32).map(|b| (vec![b % 2, b], 0.25))).unwrap();
        assert!(func.conditional_entropy(&["A"], &["B"]).unwrap().abs() < 1e-15);
    }

    fn random_pmf() -> impl Strategy<Value = FinitePmf> {
        proptest::collection::vec(0.01f64..1.0, 12).prop_map(|w| {
            let total: f64 = w.iter().sum();
            FinitePmf::from_atoms(
                &["A", "B", "C"],
                w.iter().enumerate().map(|(i, x)| {
                    let i = i as u32;
                    (vec![i % 3, (i / 3) % 2, i / 6], x / total)
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn shannon_inequalities(pmf in random_pmf()) {
            let h_a = pmf.entropy(&["A"]).unwrap();
            let h_a_b = pmf.conditional_entropy(&["A"], &["B"]).unwrap();
            let h_ab = pmf.entropy(&["A", "B"]).unwrap();
            let h_b_a = pmf.conditional_entropy(&["B"], &["A"]).unwrap();
            prop_assert!(h_a >= 0.0);
            prop_assert!(h_a_b >= -1e-12);
            prop_assert!(h_a_b <= h_a + 1e-12);
            prop_assert!((h_ab - (h_a + h_b_a)).abs() <= 1e-12);
            let i = pmf.mutual_information(&["A"], &["C"], &["B"]).unwrap();
            prop_assert!(i >= -1e-12);
        }
    }
}

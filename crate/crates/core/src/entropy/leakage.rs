//! Brute-force check of the conditional entropy leakage inequality
//! `H(Y2^n | Z^n, S^n) >= (p2/p1) H(Y1^n | Z^n, S^n)`, where one input block
//! `X^n` is observed through three on/off links: `Y1 = G1 X`, `Y2 = G2 X`
//! and the side observation `Z = G3 X`, and `S` is the per-slot gain state.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FinitePmf, IDENTITY_TOL};
use crate::error::{Error, Result};
use crate::rng::trial_rng;

/// Largest block length accepted by [`verify_leakage`].
pub const LEAKAGE_MAX_N: usize = 4;

const PROB_STREAM: u64 = 2;
const INPUT_STREAM: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeakageMode {
    /// At most one of `G1, G2, G3` is on in a slot.
    Exclusive,
    /// `G1` and `G2` independent; `G3` on only when both are off.
    IndependentLinks,
}

/// One instance of the inequality. `input[x]` is `Pr(X^n = x)` with slot `t`
/// stored in bit `t` of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageSetup {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub n: usize,
    pub input: Vec<f64>,
    pub mode: LeakageMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl LeakageOutcome {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

fn check_prob(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

impl LeakageSetup {
    /// Per-slot gain states `(g1, g2, g3)` and their probabilities.
    fn slot_law(&self) -> Result<Vec<([bool; 3], f64)>> {
        let (p1, p2, p3) = (self.p1, self.p2, self.p3);
        check_prob("p1", p1)?;
        check_prob("p2", p2)?;
        check_prob("p3", p3)?;
        if p1 <= 0.0 {
            return Err(Error::Domain("p1 must be positive".into()));
        }
        if p2 > p1 {
            return Err(Error::Domain(format!("p2 = {p2} exceeds p1 = {p1}")));
        }
        let law = match self.mode {
            LeakageMode::Exclusive => {
                let off = 1.0 - p1 - p2 - p3;
                if off < -1e-12 {
                    return Err(Error::Domain(format!("p1 + p2 + p3 = {} exceeds 1", p1 + p2 + p3)));
                }
                vec![
                    ([false, false, false], off.max(0.0)),
                    ([true, false, false], p1),
                    ([false, true, false], p2),
                    ([false, false, true], p3),
                ]
            }
            LeakageMode::IndependentLinks => {
                let both_off = (1.0 - p1) * (1.0 - p2);
                if p3 > both_off + 1e-12 {
                    return Err(Error::Domain(format!("p3 = {p3} exceeds Pr(G1 = G2 = 0) = {both_off}")));
                }
                vec![
                    ([false, false, false], (both_off - p3).max(0.0)),
                    ([true, false, false], p1 * (1.0 - p2)),
                    ([false, true, false], (1.0 - p1) * p2),
                    ([true, true, false], p1 * p2),
                    ([false, false, true], p3),
                ]
            }
        };
        Ok(law)
    }
}

/// Exact `(lhs, rhs)` by enumerating every `(x^n, s^n)` pair.
pub fn verify_leakage(setup: &LeakageSetup) -> Result<LeakageOutcome> {
    let n = setup.n;
    if n == 0 {
        return Err(Error::Domain("block length must be at least 1".into()));
    }
    if n > LEAKAGE_MAX_N {
        return Err(Error::BlockTooLarge { n, max: LEAKAGE_MAX_N });
    }
    if setup.input.len() != 1 << n {
        return Err(Error::Domain(format!(
            "input has {} atoms, expected {}",
            setup.input.len(),
            1 << n
        )));
    }
    let law = setup.slot_law()?;

    let names: Vec<String> = ["S", "Y1", "Y2", "Z"]
        .iter()
        .flat_map(|v| (0..n).map(move |t| format!("{v}_{t}")))
        .collect();
    let group = |var: &str| -> Vec<&str> {
        let prefix = format!("{var}_");
        names
            .iter()
            .filter(|s| s.starts_with(&prefix))
            .map(String::as_str)
            .collect()
    };
    let seq_count = law.len().pow(n as u32);
    let mut atoms = Vec::with_capacity(seq_count << n);
    for seq in 0..seq_count {
        let mut states = Vec::with_capacity(n);
        let mut ps = 1.0;
        let mut rest = seq;
        for _ in 0..n {
            let (g, p) = law[rest % law.len()];
            states.push((rest % law.len(), g));
            ps *= p;
            rest /= law.len();
        }
        if ps == 0.0 {
            continue;
        }
        for (x, &px) in setup.input.iter().enumerate() {
            let mut out = vec![0u32; 4 * n];
            for (t, &(idx, g)) in states.iter().enumerate() {
                let bit = ((x >> t) & 1) as u32;
                out[t] = idx as u32;
                out[n + t] = bit * g[0] as u32;
                out[2 * n + t] = bit * g[1] as u32;
                out[3 * n + t] = bit * g[2] as u32;
            }
            atoms.push((out, ps * px));
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pmf = FinitePmf::from_atoms(&refs, atoms)?;
    let given: Vec<&str> = group("Z").into_iter().chain(group("S")).collect();
    let lhs = pmf.conditional_entropy(&group("Y2"), &given)?;
    let h1 = pmf.conditional_entropy(&group("Y1"), &given)?;
    let rhs = setup.p2 / setup.p1 * h1;
    Ok(LeakageOutcome {
        lhs,
        rhs,
        holds: lhs >= rhs - IDENTITY_TOL,
    })
}

/// Symmetric Dirichlet(1) draw over the `2^n` input sequences.
pub fn dirichlet_input<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..1usize << n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Uniform laws over every non-empty subset of `{0,1}^n`, point masses
/// first.
pub fn deterministic_inputs(n: usize) -> Vec<Vec<f64>> {
    let size = 1usize << n;
    let mut subsets: Vec<u64> = (1u64..1 << size).collect();
    subsets.sort_by_key(|m| (m.count_ones(), *m));
    subsets
        .into_iter()
        .map(|mask| {
            let k = mask.count_ones() as f64;
            (0..size)
                .map(|x| if mask >> x & 1 == 1 { 1.0 / k } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Random `(p1, p2, p3)` with `p2 <= p1`, valid for `mode`.
pub fn random_leakage_probs<R: Rng + ?Sized>(mode: LeakageMode, rng: &mut R) -> (f64, f64, f64) {
    match mode {
        LeakageMode::Exclusive => {
            let cuts = dirichlet_input(2, rng);
            let (a, b) = (cuts[0], cuts[1]);
            let (p1, p2) = if a >= b { (a, b) } else { (b, a) };
            (p1.max(1e-9), p2, cuts[2])
        }
        LeakageMode::IndependentLinks => {
            let a: f64 = rng.random_range(1e-6..1.0);
            let b: f64 = rng.random_range(0.0..1.0);
            let (p1, p2) = if a >= b { (a, b) } else { (b, a) };
            let p3 = rng.random_range(0.0..=1.0) * (1.0 - p1) * (1.0 - p2);
            (p1, p2, p3)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n: usize,
    pub mode: LeakageMode,
    pub cases: usize,
    pub failures: usize,
    pub min_slack: f64,
}

impl CampaignSummary {
    pub fn all_hold(&self) -> bool {
        self.failures == 0
    }
}

/// `trials` Dirichlet inputs, plus every deterministic input when `n <= 2`,
/// each under freshly drawn link probabilities.
pub fn leakage_campaign(n: usize, mode: LeakageMode, trials: usize, seed: u64) -> Result<CampaignSummary> {
    if n > LEAKAGE_MAX_N {
        return Err(Error::BlockTooLarge { n, max: LEAKAGE_MAX_N });
    }
    let fixed = if n <= 2 { deterministic_inputs(n) } else { Vec::new() };
    let total = trials + fixed.len();
    let outcomes: Vec<LeakageOutcome> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut prng = trial_rng(seed, i as u64, PROB_STREAM);
            let (p1, p2, p3) = random_leakage_probs(mode, &mut prng);
            let input = if i < trials {
                dirichlet_input(n, &mut trial_rng(seed, i as u64, INPUT_STREAM))
            } else {
                fixed[i - trials].clone()
            };
            verify_leakage(&LeakageSetup {
                p1,
                p2,
                p3,
                n,
                input,
                mode,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CampaignSummary {
        n,
        mode,
        cases: outcomes.len(),
        failures: outcomes.iter().filter(|o| !o.holds).count(),
        min_slack: outcomes.iter().map(LeakageOutcome::slack).fold(f64::INFINITY, f64::min),
    })
}

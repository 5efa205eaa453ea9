//! Monte-Carlo experiments with random linear codes over GF(2).
//!
//! User `i` encodes `k_i` message bits with a uniformly random `n x k_i`
//! generator matrix, drawn afresh for every trial. Receivers know their
//! incoming gains and decode by rank arguments:
//!
//! * erasure decoding keeps only the slots where the direct link is on and the
//!   cross link is off, and succeeds iff the surviving rows have full column
//!   rank;
//! * joint MAC decoding uses every slot and succeeds for the desired user iff
//!   its message is identifiable, i.e. `rank[M_d | M_x] - rank[M_x] = k_d`.

mod gf2;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use gf2::Gf2Matrix;

use crate::channel::{contracted_law, ChannelParams, ChannelState, ContractedLaw, GainLaw};
use crate::error::{Error, Result};
use crate::rng::{trial_rng, CHANNEL_STREAM, CODE_STREAM};

/// Channel draws for the contracted side of a correlation pair.
const CONTRACTED_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub seed: u64,
}

impl CodeConfig {
    pub fn new(n: usize, k1: usize, k2: usize, seed: u64) -> Result<Self> {
        let c = Self { n, k1, k2, seed };
        c.validate()?;
        Ok(c)
    }

    /// Both users at rate `rate`, i.e. `k = round(rate * n)`.
    pub fn symmetric(n: usize, rate: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::Config(format!("rate {rate} must lie in [0, 1]")));
        }
        let k = (rate * n as f64).round() as usize;
        Self::new(n, k, k, seed)
    }

    /// `k_i = 0` is accepted and means user `i` is silent.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("block length n must be at least 1".into()));
        }
        if self.k1 > self.n || self.k2 > self.n {
            return Err(Error::Config(format!(
                "message lengths ({}, {}) exceed block length {}",
                self.k1, self.k2, self.n
            )));
        }
        Ok(())
    }

    pub fn rates(&self) -> (f64, f64) {
        (self.k1 as f64 / self.n as f64, self.k2 as f64 / self.n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Erasure,
    JointMac,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Erasure => "erasure",
            Scheme::JointMac => "joint-mac",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erasure" => Ok(Scheme::Erasure),
            "joint-mac" | "mac" => Ok(Scheme::JointMac),
            _ => Err(Error::Config(format!(
                "unknown scheme `{s}` (expected erasure or joint-mac)"
            ))),
        }
    }
}

/// Per-receiver decoding result of one trial. `rank_rx*` is the rank that
/// decided it: the kept-row rank for erasure decoding, the quotient rank
/// `rank[M_d | M_x] - rank[M_x]` for joint decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub decoded_ok_rx1: bool,
    pub decoded_ok_rx2: bool,
    pub rank_rx1: usize,
    pub rank_rx2: usize,
}

/// Rank-based decoding of one receiver.
///
/// `direct`/`cross` are the per-slot incoming gains, `desired`/`interferer`
/// the `n x k` generator matrices of the two users.
pub fn decode_at_receiver(
    scheme: Scheme,
    direct: &[bool],
    cross: &[bool],
    desired: &Gf2Matrix,
    interferer: &Gf2Matrix,
) -> (bool, usize) {
    let k = desired.cols();
    match scheme {
        Scheme::Erasure => {
            let keep = (0..direct.len()).filter(|&t| direct[t] && !cross[t]);
            let rank = desired.select_rows(keep).rank();
            (rank == k, rank)
        }
        Scheme::JointMac => {
            let stacked = interferer.hstack_masked(desired, cross, direct);
            let pivots = stacked.rank_profile();
            let rank_x = pivots.iter().filter(|&&c| c < interferer.cols()).count();
            let quotient = pivots.len() - rank_x;
            (quotient == k, quotient)
        }
    }
}

/// One trial: fresh codes from the code stream, `n` gain states from
/// `law` drawn on `channel_stream`.
pub fn run_trial(law: &GainLaw, config: &CodeConfig, scheme: Scheme, trial: u64, channel_stream: u64) -> TrialOutcome {
    let mut code_rng = trial_rng(config.seed, trial, CODE_STREAM);
    let a1 = Gf2Matrix::random(config.n, config.k1, &mut code_rng);
    let a2 = Gf2Matrix::random(config.n, config.k2, &mut code_rng);
    let mut chan_rng = trial_rng(config.seed, trial, channel_stream);
    let states: Vec<ChannelState> = (0..config.n).map(|_| law.sample(&mut chan_rng)).collect();
    let pick = |f: fn(&ChannelState) -> bool| states.iter().map(f).collect::<Vec<bool>>();
    let (g11, g21, g22, g12) = (pick(|s| s.g11), pick(|s| s.g21), pick(|s| s.g22), pick(|s| s.g12));
    let (ok1, r1) = decode_at_receiver(scheme, &g11, &g21, &a1, &a2);
    let (ok2, r2) = decode_at_receiver(scheme, &g22, &g12, &a2, &a1);
    TrialOutcome {
        decoded_ok_rx1: ok1,
        decoded_ok_rx2: ok2,
        rank_rx1: r1,
        rank_rx2: r2,
    }
}

fn run_trials(
    law: &GainLaw,
    config: &CodeConfig,
    scheme: Scheme,
    trials: usize,
    channel_stream: u64,
) -> Vec<TrialOutcome> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(law, config, scheme, t, channel_stream))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessRates {
    pub rx1: f64,
    pub rx2: f64,
    pub trials: usize,
}

impl SuccessRates {
    fn from_outcomes(outcomes: &[TrialOutcome]) -> Self {
        let t = outcomes.len().max(1) as f64;
        Self {
            rx1: outcomes.iter().filter(|o| o.decoded_ok_rx1).count() as f64 / t,
            rx2: outcomes.iter().filter(|o| o.decoded_ok_rx2).count() as f64 / t,
            trials: outcomes.len(),
        }
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.rx1 + self.rx2)
    }
}

pub fn simulate(params: &ChannelParams, config: &CodeConfig, scheme: Scheme, trials: usize) -> Result<SuccessRates> {
    config.validate()?;
    let law = GainLaw::Independent(*params);
    Ok(SuccessRates::from_outcomes(&run_trials(
        &law,
        config,
        scheme,
        trials,
        CHANNEL_STREAM,
    )))
}

/// Each receiver treats slots hit by interference as erasures.
pub fn simulate_treat_as_erasure(params: &ChannelParams, config: &CodeConfig, trials: usize) -> Result<SuccessRates> {
    simulate(params, config, Scheme::Erasure, trials)
}

/// Each receiver decodes its own message jointly with the interferer's code.
pub fn simulate_joint_mac(params: &ChannelParams, config: &CodeConfig, trials: usize) -> Result<SuccessRates> {
    simulate(params, config, Scheme::JointMac, trials)
}

/// Error rates per receiver on the original and contracted channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub scheme: Scheme,
    pub trials: usize,
    pub err_original: [f64; 2],
    pub err_contracted: [f64; 2],
    /// `3 sigma` pooled two-proportion bound per receiver.
    pub bound: [f64; 2],
    pub ci_overlap: bool,
}

/// `3 sigma` bound on `|p_a - p_b|` for two independent samples of size
/// `trials` under the pooled null.
pub fn two_proportion_bound(p_a: f64, p_b: f64, trials: usize) -> f64 {
    let pooled = 0.5 * (p_a + p_b);
    3.0 * (pooled * (1.0 - pooled) * 2.0 / trials as f64).sqrt()
}

/// Runs the same codes over the independent-gains channel and over its
/// contraction (channel draws on separate streams) and compares the per
/// receiver error rates.
pub fn simulate_correlation_pair(
    params: &ChannelParams,
    config: &CodeConfig,
    scheme: Scheme,
    trials: usize,
) -> Result<CorrelationResult> {
    let law = contracted_law(params, ContractedLaw::natural_tag(params))?;
    simulate_correlation_with(params, &law, config, scheme, trials)
}

pub fn simulate_correlation_with(
    params: &ChannelParams,
    law: &ContractedLaw,
    config: &CodeConfig,
    scheme: Scheme,
    trials: usize,
) -> Result<CorrelationResult> {
    config.validate()?;
    if law.params != *params {
        return Err(Error::RegimeMismatch(
            "contracted law built for different parameters".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    let original = SuccessRates::from_outcomes(&run_trials(
        &GainLaw::Independent(*params),
        config,
        scheme,
        trials,
        CHANNEL_STREAM,
    ));
    let contracted = SuccessRates::from_outcomes(&run_trials(
        &GainLaw::Contracted(law.clone()),
        config,
        scheme,
        trials,
        CONTRACTED_STREAM,
    ));
    let err_original = [1.0 - original.rx1, 1.0 - original.rx2];
    let err_contracted = [1.0 - contracted.rx1, 1.0 - contracted.rx2];
    let bound = [0, 1].map(|i| two_proportion_bound(err_original[i], err_contracted[i], trials));
    let ci_overlap = (0..2).all(|i| (err_original[i] - err_contracted[i]).abs() <= bound[i]);
    Ok(CorrelationResult {
        scheme,
        trials,
        err_original,
        err_contracted,
        bound,
        ci_overlap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rate: f64,
    pub success_rate: f64,
    pub trials: usize,
    pub n: usize,
    pub scheme: Scheme,
    pub p_d: f64,
    pub p_c: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Linear interpolation of the first 50% down-crossing.
    pub crossing: Option<f64>,
    pub threshold: f64,
}

impl SweepTable {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Largest symmetric rate at which the scheme decodes reliably as `n` grows.
///
/// For joint decoding the desired message is identifiable either inside the
/// MAC region or, once the interference rate exceeds `p_c`, up to `p_d q_c`.
pub fn analytic_threshold(params: &ChannelParams, scheme: Scheme) -> f64 {
    let (pd, pc, qd, qc) = (params.p_d(), params.p_c(), params.q_d(), params.q_c());
    match scheme {
        Scheme::Erasure => pd * qc,
        Scheme::JointMac => pd.min(pc).min(0.5 * (1.0 - qd * qc)).max(pd * qc),
    }
}

/// First point where success falls from `>= 0.5` to `< 0.5`, linearly
/// interpolated.
pub fn half_crossing(points: &[(f64, f64)]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((r0, s0), (r1, s1)) = (w[0], w[1]);
        (s0 >= 0.5 && s1 < 0.5).then(|| r0 + (s0 - 0.5) / (s0 - s1) * (r1 - r0))
    })
}

/// Success rate (mean over both users) at each symmetric rate of `grid`.
/// Every grid point reuses `seed`, so neighbouring points share code and
/// channel draws.
pub fn rate_sweep(
    params: &ChannelParams,
    scheme: Scheme,
    n: usize,
    trials: usize,
    grid: &[f64],
    seed: u64,
) -> Result<SweepTable> {
    let configs: Vec<(f64, CodeConfig)> = grid
        .iter()
        .map(|&r| CodeConfig::symmetric(n, r, seed).map(|c| (r, c)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(configs.len());
    for (rate, config) in configs {
        let rates = simulate(params, &config, scheme, trials)?;
        rows.push(SweepRow {
            rate,
            success_rate: rates.mean(),
            trials,
            n,
            scheme,
            p_d: params.p_d(),
            p_c: params.p_c(),
            seed,
        });
    }
    let crossing = half_crossing(&rows.iter().map(|r| (r.rate, r.success_rate)).collect::<Vec<_>>());
    Ok(SweepTable {
        rows,
        crossing,
        threshold: analytic_threshold(params, scheme),
    })
}

//! Link statistics and per-slot channel behaviour.
//!
//! Each of the four links `Tx_i -> Rx_j` is an on/off gain drawn i.i.d. over
//! time. Direct links are on with probability `p_d`, cross links with `p_c`.
//! Receiver `i` observes `y_i = g_ii x_i XOR g_{j,i} x_j`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LAW_TOL: f64 = 1e-12;

/// Bernoulli on-probabilities of the direct and cross links.
///
/// The complements `q_d`, `q_c` are always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ChannelParams {
    p_d: f64,
    p_c: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    p_d: f64,
    p_c: f64,
}

impl TryFrom<RawParams> for ChannelParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ChannelParams::new(raw.p_d, raw.p_c)
    }
}

impl From<ChannelParams> for RawParams {
    fn from(p: ChannelParams) -> Self {
        RawParams { p_d: p.p_d, p_c: p.p_c }
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

impl ChannelParams {
    pub fn new(p_d: f64, p_c: f64) -> Result<Self> {
        Ok(Self {
            p_d: check_probability("p_d", p_d)?,
            p_c: check_probability("p_c", p_c)?,
        })
    }

    #[inline]
    pub fn p_d(&self) -> f64 {
        self.p_d
    }

    #[inline]
    pub fn p_c(&self) -> f64 {
        self.p_c
    }

    #[inline]
    pub fn q_d(&self) -> f64 {
        1.0 - self.p_d
    }

    #[inline]
    pub fn q_c(&self) -> f64 {
        1.0 - self.p_c
    }

    /// `p_d + p_c - p_d p_c`: probability that at least one incoming link of a
    /// receiver is on, i.e. `1 - q_d q_c`.
    #[inline]
    pub fn union_prob(&self) -> f64 {
        self.p_d + self.p_c - self.p_d * self.p_c
    }
}

/// Gains of the four links during one slot. `gij` is the link `Tx_i -> Rx_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelState {
    pub g11: bool,
    pub g21: bool,
    pub g22: bool,
    pub g12: bool,
}

impl ChannelState {
    pub const ALL_ON: Self = Self::from_bits(true, true, true, true);
    pub const ALL_OFF: Self = Self::from_bits(false, false, false, false);

    /// Pattern written receiver by receiver: `(g11, g21; g22, g12)`.
    pub const fn from_bits(g11: bool, g21: bool, g22: bool, g12: bool) -> Self {
        Self { g11, g21, g22, g12 }
    }

    /// All sixteen realisations, indexed by `g11 | g21<<1 | g22<<2 | g12<<3`.
    pub fn all() -> impl Iterator<Item = ChannelState> {
        (0u8..16).map(Self::from_index)
    }

    pub fn from_index(idx: u8) -> Self {
        Self::from_bits(idx & 1 != 0, idx & 2 != 0, idx & 4 != 0, idx & 8 != 0)
    }

    pub fn index(&self) -> u8 {
        self.g11 as u8 | (self.g21 as u8) << 1 | (self.g22 as u8) << 2 | (self.g12 as u8) << 3
    }

    /// Incoming gains `(direct, cross)` at receiver 1 or 2.
    pub fn incoming(&self, receiver: usize) -> (bool, bool) {
        match receiver {
            1 => (self.g11, self.g21),
            2 => (self.g22, self.g12),
            _ => panic!("receiver index must be 1 or 2, got {receiver}"),
        }
    }

    /// Probability of this realisation under independent links.
    pub fn probability(&self, params: &ChannelParams) -> f64 {
        let bern = |on: bool, p: f64| if on { p } else { 1.0 - p };
        bern(self.g11, params.p_d())
            * bern(self.g22, params.p_d())
            * bern(self.g21, params.p_c())
            * bern(self.g12, params.p_c())
    }
}

/// Bits sent and received during one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSignal {
    pub x1: bool,
    pub x2: bool,
    pub y1: bool,
    pub y2: bool,
}

impl SlotSignal {
    pub fn produce(x1: bool, x2: bool, state: &ChannelState) -> Self {
        let (y1, y2) = transmit(x1, x2, state);
        Self { x1, x2, y1, y2 }
    }
}

/// Draws four independent Bernoulli gains.
pub fn sample_state<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> ChannelState {
    ChannelState {
        g11: rng.random_bool(params.p_d()),
        g21: rng.random_bool(params.p_c()),
        g22: rng.random_bool(params.p_d()),
        g12: rng.random_bool(params.p_c()),
    }
}

/// `y1 = g11 x1 ^ g21 x2`, `y2 = g22 x2 ^ g12 x1`.
#[inline]
pub fn transmit(x1: bool, x2: bool, state: &ChannelState) -> (bool, bool) {
    let y1 = (state.g11 & x1) ^ (state.g21 & x2);
    let y2 = (state.g22 & x2) ^ (state.g12 & x1);
    (y1, y2)
}

/// Which contracted construction to use.
///
/// `LowMid` covers `p_c <= p_d` (weak and moderate interference), `High`
/// covers `p_d <= p_c`. At `p_c = p_d` the two coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LawTag {
    LowMid,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContractedStateId {
    A,
    B,
    C,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractedAtom {
    pub id: ContractedStateId,
    pub state: ChannelState,
    pub prob: f64,
}

/// A correlated 5-state gain law whose per-receiver marginals match the
/// independent-links channel.
///
/// Gain patterns, as `(g11, g21; g22, g12)`:
///
/// | state | LowMid      | prob        | High        | prob        |
/// |-------|-------------|-------------|-------------|-------------|
/// | A     | (1,1;1,1)   | p_d p_c     | (1,1;1,1)   | p_d p_c     |
/// | B     | (1,0;1,0)   | p_d - p_c   | (0,1;0,1)   | p_c - p_d   |
/// | C     | (1,0;0,1)   | q_d p_c     | (1,0;0,1)   | p_d q_c     |
/// | D     | (0,1;1,0)   | q_d p_c     | (0,1;1,0)   | p_d q_c     |
/// | E     | (0,0;0,0)   | q_d q_c     | (0,0;0,0)   | q_d q_c     |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractedLaw {
    pub tag: LawTag,
    pub params: ChannelParams,
    pub atoms: [ContractedAtom; 5],
}

fn clamp_tiny(p: f64) -> f64 {
    if (-1e-15..0.0).contains(&p) {
        0.0
    } else {
        p
    }
}

/// Builds the contracted law for `tag`.
pub fn contracted_law(params: &ChannelParams, tag: LawTag) -> Result<ContractedLaw> {
    use ContractedStateId::*;
    let (pd, pc, qd, qc) = (params.p_d(), params.p_c(), params.q_d(), params.q_c());
    let (b_state, b_prob, cd_prob) = match tag {
        LawTag::LowMid => {
            if pc > pd {
                return Err(Error::RegimeMismatch(format!(
                    "LowMid contraction needs p_c <= p_d (p_d = {pd}, p_c = {pc})"
                )));
            }
            (ChannelState::from_bits(true, false, true, false), pd - pc, qd * pc)
        }
        LawTag::High => {
            if pd > pc {
                return Err(Error::RegimeMismatch(format!(
                    "High contraction needs p_d <= p_c (p_d = {pd}, p_c = {pc})"
                )));
            }
            (ChannelState::from_bits(false, true, false, true), pc - pd, pd * qc)
        }
    };
    let atoms = [
        ContractedAtom {
            id: A,
            state: ChannelState::ALL_ON,
            prob: pd * pc,
        },
        ContractedAtom {
            id: B,
            state: b_state,
            prob: clamp_tiny(b_prob),
        },
        ContractedAtom {
            id: C,
            state: ChannelState::from_bits(true, false, false, true),
            prob: clamp_tiny(cd_prob),
        },
        ContractedAtom {
            id: D,
            state: ChannelState::from_bits(false, true, true, false),
            prob: clamp_tiny(cd_prob),
        },
        ContractedAtom {
            id: E,
            state: ChannelState::ALL_OFF,
            prob: qd * qc,
        },
    ];
    let law = ContractedLaw {
        tag,
        params: *params,
        atoms,
    };
    let total: f64 = law.atoms.iter().map(|a| a.prob).sum();
    if (total - 1.0).abs() > LAW_TOL {
        return Err(Error::Consistency(format!("contracted law sums to {total}")));
    }
    Ok(law)
}

impl ContractedLaw {
    /// Tag matching the parameters (`LowMid` when `p_c <= p_d`).
    pub fn natural_tag(params: &ChannelParams) -> LawTag {
        if params.p_c() <= params.p_d() {
            LawTag::LowMid
        } else {
            LawTag::High
        }
    }

    pub fn probs(&self) -> [f64; 5] {
        self.atoms.map(|a| a.prob)
    }

    /// `Pr(pred(state))` under the law.
    pub fn prob_of(&self, pred: impl Fn(&ChannelState) -> bool) -> f64 {
        self.atoms.iter().filter(|a| pred(&a.state)).map(|a| a.prob).sum()
    }

    /// Worst absolute deviation among the six marginal identities required of
    /// a contracted law: per receiver `Pr(direct)`, `Pr(cross)` and
    /// `Pr(direct, cross) = p_d p_c`.
    pub fn marginal_deviation(&self) -> f64 {
        let (pd, pc) = (self.params.p_d(), self.params.p_c());
        [1usize, 2]
            .iter()
            .flat_map(|&rx| {
                [
                    self.prob_of(|s| s.incoming(rx).0) - pd,
                    self.prob_of(|s| s.incoming(rx).1) - pc,
                    self.prob_of(|s| s.incoming(rx).0 && s.incoming(rx).1) - pd * pc,
                ]
            })
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// Inverse-CDF draw of one contracted state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelState {
        sample_contracted(self, rng).state
    }
}

pub fn sample_contracted<R: Rng + ?Sized>(law: &ContractedLaw, rng: &mut R) -> ContractedAtom {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for atom in &law.atoms {
        acc += atom.prob;
        if u < acc {
            return *atom;
        }
    }
    // u landed in the rounding slack above the cumulative sum
    *law.atoms
        .iter()
        .rev()
        .find(|a| a.prob > 0.0)
        .expect("law has positive mass")
}

/// A source of channel states: the original independent law or a contraction.
#[derive(Debug, Clone, PartialEq)]
pub enum GainLaw {
    Independent(ChannelParams),
    Contracted(ContractedLaw),
}

impl GainLaw {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelState {
        match self {
            GainLaw::Independent(p) => sample_state(p, rng),
            GainLaw::Contracted(law) => law.sample(rng),
        }
    }

    pub fn params(&self) -> &ChannelParams {
        match self {
            GainLaw::Independent(p) => p,
            GainLaw::Contracted(law) => &law.params,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn params(pd: f64, pc: f64) -> ChannelParams {
        ChannelParams::new(pd, pc).unwrap()
    }

    #[test]
    fn rejects_out_of_range_probabilities() {
        assert!(ChannelParams::new(1.1, 0.2).is_err());
        assert!(ChannelParams::new(0.2, -0.1).is_err());
        assert!(ChannelParams::new(f64::NAN, 0.2).is_err());
        let p = params(0.3, 0.7);
        assert_eq!(p.q_d(), 1.0 - 0.3);
        assert_eq!(p.q_c(), 1.0 - 0.7);
    }

    #[test]
    fn degenerate_sampling() {
        let mut rng = seeded(11);
        for _ in 0..100 {
            assert_eq!(sample_state(&params(1.0, 1.0), &mut rng), ChannelState::ALL_ON);
            assert_eq!(sample_state(&params(0.0, 0.0), &mut rng), ChannelState::ALL_OFF);
        }
    }

    #[test]
    fn transmit_examples() {
        assert_eq!(transmit(true, true, &ChannelState::ALL_ON), (false, false));
        let s = ChannelState::from_bits(true, true, true, false);
        assert_eq!(transmit(true, false, &s), (true, false));
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let p = params(0.4, 0.7);
        let a: Vec<_> = {
            let mut r = seeded(5);
            (0..64).map(|_| sample_state(&p, &mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = seeded(5);
            (0..64).map(|_| sample_state(&p, &mut r)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn contracted_low_mid_values() {
        let law = contracted_law(&params(0.5, 0.25), LawTag::LowMid).unwrap();
        let expected = [0.125, 0.25, 0.125, 0.125, 0.375];
        for (got, want) in law.probs().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(law.marginal_deviation() < 1e-12);
    }

    #[test]
    fn contracted_deterministic_and_boundary() {
        let law = contracted_law(&params(1.0, 1.0), LawTag::LowMid).unwrap();
        assert_eq!(law.probs(), [1.0, 0.0, 0.0, 0.0, 0.0]);
        let mut rng = seeded(3);
        for _ in 0..50 {
            assert_eq!(law.sample(&mut rng), ChannelState::ALL_ON);
        }
        let lo = contracted_law(&params(0.6, 0.6), LawTag::LowMid).unwrap();
        let hi = contracted_law(&params(0.6, 0.6), LawTag::High).unwrap();
        assert_eq!(lo.probs(), hi.probs());
        assert_eq!(lo.atoms[1].prob, 0.0);
    }

    #[test]
    fn contracted_regime_mismatch() {
        assert!(matches!(
            contracted_law(&params(0.3, 0.5), LawTag::LowMid),
            Err(Error::RegimeMismatch(_))
        ));
        assert!(matches!(
            contracted_law(&params(0.5, 0.3), LawTag::High),
            Err(Error::RegimeMismatch(_))
        ));
    }

    #[test]
    fn params_serde_validates() {
        let p: ChannelParams = serde_json::from_str(r#"{"p_d":0.5,"p_c":0.1}"#).unwrap();
        assert_eq!(p, params(0.5, 0.1));
        assert!(serde_json::from_str::<ChannelParams>(r#"{"p_d":1.5,"p_c":0.1}"#).is_err());
    }
}

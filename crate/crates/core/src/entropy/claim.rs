//! Codewords built without channel knowledge stay independent given the
//! gains: `I(X1^n; X2^n | G^n) = 0` whenever the messages are independent.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{FinitePmf, IDENTITY_TOL};
use crate::channel::{ChannelParams, ChannelState};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Largest block length accepted by the enumeration.
pub const CLAIM_MAX_N: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncoderCoupling {
    /// `W1` and `W2` independent and uniform.
    Independent,
    /// Both encoders read the same uniform message.
    SharedMessage,
}

/// Deterministic encoders: `enc1[w]` is the `n`-bit codeword for message `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderPair {
    pub n: usize,
    pub enc1: Vec<u32>,
    pub enc2: Vec<u32>,
    pub coupling: EncoderCoupling,
}

impl EncoderPair {
    pub fn new(n: usize, enc1: Vec<u32>, enc2: Vec<u32>, coupling: EncoderCoupling) -> Result<Self> {
        if n > CLAIM_MAX_N {
            return Err(Error::BlockTooLarge { n, max: CLAIM_MAX_N });
        }
        for enc in [&enc1, &enc2] {
            if enc.is_empty() || !enc.len().is_power_of_two() {
                return Err(Error::Domain("encoder table size must be a power of two".into()));
            }
            if enc.iter().any(|&c| c >> n != 0) {
                return Err(Error::Domain(format!("codeword wider than n = {n}")));
            }
        }
        if coupling == EncoderCoupling::SharedMessage && enc1.len() != enc2.len() {
            return Err(Error::Domain("shared message needs equal message sets".into()));
        }
        Ok(Self {
            n,
            enc1,
            enc2,
            coupling,
        })
    }
}

/// Random encoders with `1..=n` message bits each (equal sizes when the
/// message is shared).
pub fn random_encoder_pair<R: Rng + ?Sized>(n: usize, coupling: EncoderCoupling, rng: &mut R) -> Result<EncoderPair> {
    if n == 0 || n > CLAIM_MAX_N {
        return Err(Error::BlockTooLarge { n, max: CLAIM_MAX_N });
    }
    let k1 = rng.random_range(1..=n);
    let k2 = match coupling {
        EncoderCoupling::Independent => rng.random_range(1..=n),
        EncoderCoupling::SharedMessage => k1,
    };
    let mut table = |k: usize| (0..1u32 << k).map(|_| rng.random_range(0..1u32 << n)).collect();
    let enc1 = table(k1);
    let enc2 = table(k2);
    EncoderPair::new(n, enc1, enc2, coupling)
}

/// Exact `I(X1^n; X2^n | G^n)` under i.i.d. gains drawn from `params`.
pub fn claim_mutual_information(params: &ChannelParams, pair: &EncoderPair) -> Result<f64> {
    let n = pair.n;
    if n > CLAIM_MAX_N {
        return Err(Error::BlockTooLarge { n, max: CLAIM_MAX_N });
    }
    let messages: Vec<(usize, usize, f64)> = match pair.coupling {
        EncoderCoupling::Independent => {
            let p = 1.0 / (pair.enc1.len() * pair.enc2.len()) as f64;
            (0..pair.enc1.len())
                .flat_map(|a| (0..pair.enc2.len()).map(move |b| (a, b, p)))
                .collect()
        }
        EncoderCoupling::SharedMessage => {
            let p = 1.0 / pair.enc1.len() as f64;
            (0..pair.enc1.len()).map(|w| (w, w, p)).collect()
        }
    };
    let states: Vec<f64> = ChannelState::all().map(|s| s.probability(params)).collect();
    let mut atoms = Vec::new();
    for g in 0..16usize.pow(n as u32) {
        let mut pg = 1.0;
        let mut rest = g;
        for _ in 0..n {
            pg *= states[rest % 16];
            rest /= 16;
        }
        if pg == 0.0 {
            continue;
        }
        for &(w1, w2, pw) in &messages {
            atoms.push((
                vec![g as u32, w1 as u32, w2 as u32, pair.enc1[w1], pair.enc2[w2]],
                pg * pw,
            ));
        }
    }
    let pmf = FinitePmf::from_atoms(&["G", "W1", "W2", "X1", "X2"], atoms)?;
    pmf.mutual_information(&["X1"], &["X2"], &["G"])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub n: usize,
    pub coupling: EncoderCoupling,
    pub mutual_information: f64,
    pub holds: bool,
}

/// Draws one independent-message encoder pair from `seed` and checks the
/// conditional mutual information vanishes.
pub fn verify_claim_independence(params: &ChannelParams, n: usize, seed: u64) -> Result<ClaimReport> {
    let pair = random_encoder_pair(n, EncoderCoupling::Independent, &mut seeded(seed))?;
    let mi = claim_mutual_information(params, &pair)?;
    Ok(ClaimReport {
        n,
        coupling: pair.coupling,
        mutual_information: mi,
        holds: mi <= IDENTITY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ChannelParams {
        ChannelParams::new(0.7, 0.4).unwrap()
    }

    #[test]
    fn constant_encoders_give_zero() {
        let pair = EncoderPair::new(2, vec![3; 4], vec![1; 2], EncoderCoupling::Independent).unwrap();
        assert_eq!(claim_mutual_information(&params(), &pair).unwrap(), 0.0);
    }

    #[test]
    fn random_independent_pairs_hold() {
        for seed in 0..20 {
            let r = verify_claim_independence(&params(), 2, seed).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }

    #[test]
    fn shared_identity_encoders_leak_n_bits() {
        let id: Vec<u32> = (0..4).collect();
        let pair = EncoderPair::new(2, id.clone(), id, EncoderCoupling::SharedMessage).unwrap();
        let mi = claim_mutual_information(&params(), &pair).unwrap();
        assert!((mi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn block_bound() {
        assert_eq!(
            verify_claim_independence(&params(), 4, 0),
            Err(Error::BlockTooLarge { n: 4, max: 3 })
        );
    }
}

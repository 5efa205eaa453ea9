//! Seed derivation for reproducible, order-independent Monte-Carlo runs.
//!
//! Every trial owns a generator seeded from `(master_seed, trial_index,
//! stream)`, so the outcome of trial `t` never depends on which thread ran it
//! or how many trials came before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream used for code (generator matrix) draws.
pub const CODE_STREAM: u64 = 0;
/// Stream used for channel state draws.
pub const CHANNEL_STREAM: u64 = 1;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a trial index and a stream label.
pub fn derive_seed(master: u64, index: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ index) ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub fn trial_rng(master: u64, index: u64, stream: u64) -> SimRng {
    seeded(derive_seed(master, index, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derived_streams_are_distinct_and_stable() {
        assert_eq!(derive_seed(7, 3, 0), derive_seed(7, 3, 0));
        assert_ne!(derive_seed(7, 3, 0), derive_seed(7, 3, 1));
        assert_ne!(derive_seed(7, 3, 0), derive_seed(7, 4, 0));
        assert_ne!(derive_seed(7, 3, 0), derive_seed(8, 3, 0));
        let a: Vec<u64> = (0..4).map(|_| trial_rng(1, 2, 0).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }
}

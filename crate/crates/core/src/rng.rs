//! Deterministic seed derivation.
//!
//! Every random decision in an optimizer run draws from a ChaCha stream whose
//! seed is a pure function of the run seed and a small tuple of integers
//! (generation, operator tag, offspring index). Offspring can therefore be
//! produced in any order, or in parallel, without changing the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `base`. Platform independent and order sensitive.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// A fresh generator seeded from `derive_seed(base, parts)`.
pub fn stream(base: u64, parts: &[u64]) -> Rng {
    Rng::seed_from_u64(derive_seed(base, parts))
}

/// 64-bit FNV-1a of a label; stable across builds, unlike `DefaultHasher`.
pub fn hash_label(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Operator tags used when deriving per-offspring streams.
pub(crate) mod tag {
    pub const INIT: u64 = 1;
    pub const POSITIONS: u64 = 2;
    pub const RANDOM_PHASE: u64 = 3;
    pub const PHASE_LEARNING: u64 = 4;
    pub const BEAMFORMING: u64 = 5;
    pub const PBEST: u64 = 6;
    pub const JOINT: u64 = 7;
    pub const SWARM: u64 = 8;
    pub const DECOMPOSITION: u64 = 9;
    pub const STRATEGY: u64 = 10;
    pub const NICHE: u64 = 11;
}

//! Per-stage seed derivation from the single user seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer applied to `seed ^ tag`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const TAG_RANK: u64 = 1;
pub const TAG_SUPER: u64 = 2;
pub const TAG_PIVOT: u64 = 3;
pub const TAG_PROLONG: u64 = 4;
pub const TAG_MINIMAL: u64 = 5;
pub const TAG_VARIABLE: u64 = 6;
pub const TAG_LIFT: u64 = 7;
pub const TAG_DENOM: u64 = 8;

//! Seed streams.
//!
//! Every random draw comes from a ChaCha8 generator keyed by a 64-bit seed
//! mixed with a path of stream indices (for example sweep point, then trial).
//! Each trial therefore has its own generator and results do not depend on
//! how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Generator for the stream reached from `seed` through `path`.
pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let leaf = path.iter().fold(seed, |s, &i| derive_seed(s, i));
    ChaCha8Rng::seed_from_u64(leaf)
}

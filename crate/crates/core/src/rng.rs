//! Seed derivation for whole-run determinism.
//!
//! One master seed from the config drives everything; each component
//! (init, shuffle, per-lead sweep runs, synthetic regions) derives its
//! own stream seed so components can be reordered or parallelized
//! without changing results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over a byte string.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a component seed from the master seed, a component tag and an
/// index (lead, region, epoch...). Stable across runs and platforms.
pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    splitmix64(master ^ fnv1a(tag.as_bytes()) ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// The deterministic RNG used throughout: ChaCha8 keyed from a u64 seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

//! Named, splittable RNG streams.
//!
//! Every sample gets its own stream derived from `(master seed, name)`, so
//! generation is reproducible and order-independent under any worker count.
//! The derivation uses a fixed splitmix64-based mixer rather than the
//! standard library hasher, which is not guaranteed stable across releases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The deterministic RNG used everywhere in this crate.
pub type Rng = ChaCha8Rng;

#[inline]
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a byte string into a seed, one splitmix round per 8-byte chunk.
fn mix_bytes(mut state: u64, bytes: &[u8]) -> u64 {
    for chunk in bytes.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        state = splitmix64(state ^ u64::from_le_bytes(buf));
    }
    splitmix64(state ^ bytes.len() as u64)
}

/// Derives the seed for a named child stream.
pub fn derive_seed(master_seed: u64, name: &str) -> u64 {
    mix_bytes(splitmix64(master_seed), name.as_bytes())
}

/// Derives the seed for a named, indexed child stream.
pub fn derive_seed_indexed(master_seed: u64, name: &str, index: u64) -> u64 {
    splitmix64(derive_seed(master_seed, name) ^ splitmix64(index))
}

/// Creates a child RNG for a named stream.
pub fn stream(master_seed: u64, name: &str) -> Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master_seed, name))
}

/// Creates a child RNG for a named, indexed stream (e.g. one per sample).
pub fn stream_indexed(master_seed: u64, name: &str, index: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(derive_seed_indexed(master_seed, name, index))
}

/// Creates an RNG directly from a seed stored in a manifest record.
pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

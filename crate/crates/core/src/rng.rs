//! Seeded randomness.
//!
//! Every random choice in the library is drawn from a caller-supplied
//! generator. The command line tool uses ChaCha20 (20 rounds, 64-bit block
//! counter, nonce 0) keyed by [`rand_chacha::ChaCha20Rng::seed_from_u64`]:
//! the 64-bit seed is expanded to a 256-bit key with the PCG32 stream used by
//! `rand_core`. Integers in a range are drawn with `rand` 0.8's widening
//! multiply rejection method.

use rand::SeedableRng;
pub use rand_chacha::ChaCha20Rng;

pub fn seeded(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Seed of the `index`-th job in a batch started from `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}

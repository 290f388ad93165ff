//! Named random streams. Every command derives its own generator from the
//! config seed and a stream label, so adding samples to one command never
//! shifts the draws of another.

use cqms_core::hash::fnv1a64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub fn stream(seed: u64, label: &str) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a64(label.as_bytes()).to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

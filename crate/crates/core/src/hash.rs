//! FNV-1a, used for cache fingerprints and seed-stream derivation.
//!
//! `std::hash` makes no stability promise across releases, and fingerprints
//! here end up in file names and reproducibility checks, so we pin the exact
//! function.

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

//! Deterministic randomness.
//!
//! Every randomized operation in this crate is driven by a caller-supplied
//! generator, and results are byte-exact across platforms: sampling uses
//! plain rejection on `next_u64`, never platform- or version-dependent
//! distribution code. Parallel work never shares a generator; each unit of
//! work derives its own child generator from `(seed, index)`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Generator for a top-level 64-bit seed (as taken on the command line).
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Independent generator for one unit of work under a master seed.
///
/// The derivation hashes `(seed, index)`, so trial `i` sees the same stream
/// no matter how trials are scheduled across threads.
pub fn child_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut h = Sha256::new();
    h.update(b"modlat/trial");
    h.update(seed.to_le_bytes());
    h.update(index.to_le_bytes());
    ChaCha12Rng::from_seed(h.finalize().into())
}

/// Generator keyed by a byte string (used for hash-to-lattice streams).
pub fn keyed_rng(domain: &[u8], material: &[&[u8]]) -> ChaCha12Rng {
    let mut h = Sha256::new();
    h.update(domain);
    for part in material {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    ChaCha12Rng::from_seed(h.finalize().into())
}

/// Uniform value in `[0, bound)` by rejection sampling.
pub(crate) fn uniform<R: RngCore + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0);
    // 2^64 mod bound; draws at or above the last full multiple are rejected.
    let rem = ((u64::MAX % bound) + 1) % bound;
    loop {
        let x = rng.next_u64();
        if rem == 0 || x <= u64::MAX - rem {
            return x % bound;
        }
    }
}

/// Uniform value in the inclusive range `[lo, hi]`.
pub(crate) fn uniform_range<R: RngCore + ?Sized>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    assert!(lo <= hi);
    lo + uniform(rng, hi - lo + 1)
}

//! Stable seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` keyed by a 64-bit seed.
//! Seeds for sub-streams are derived by hashing a tagged byte layout with
//! SHA-256 and taking the first eight digest bytes as a little-endian `u64`.
//! Field encoding:
//!
//! * integers: fixed-width little-endian (`u64` as 8 bytes, `u32` as 4 bytes)
//! * strings: `u32` little-endian byte length followed by the UTF-8 bytes
//!
//! The layout does not depend on platform endianness or pointer width, so
//! derived seeds replay identically across machines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Incremental builder for a hashed seed.
#[derive(Clone)]
pub struct SeedHasher {
    inner: Sha256,
}

impl SeedHasher {
    /// Starts a hash in the given domain (a short ASCII tag).
    pub fn new(domain: &str) -> Self {
        let mut h = SeedHasher { inner: Sha256::new() };
        h = h.str(domain);
        h
    }

    pub fn u64(mut self, v: u64) -> Self {
        self.inner.update(v.to_le_bytes());
        self
    }

    pub fn u32(mut self, v: u32) -> Self {
        self.inner.update(v.to_le_bytes());
        self
    }

    pub fn str(mut self, s: &str) -> Self {
        self.inner.update((s.len() as u32).to_le_bytes());
        self.inner.update(s.as_bytes());
        self
    }

    pub fn finish(self) -> u64 {
        let digest = self.inner.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(bytes)
    }
}

/// Seeded generator used by every stochastic component.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent sub-stream from `seed` and a purpose tag.
pub fn substream(seed: u64, tag: &str) -> ChaCha8Rng {
    rng_from_seed(SeedHasher::new("invbench/substream").u64(seed).str(tag).finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_field_sensitive() {
        let a = SeedHasher::new("t").u64(1).str("x").finish();
        let b = SeedHasher::new("t").u64(1).str("x").finish();
        let c = SeedHasher::new("t").u64(2).str("x").finish();
        assert_eq!(a, b);
        assert_ne!(a, c);
        // length prefix separates ("ab","c") from ("a","bc")
        let d = SeedHasher::new("t").str("ab").str("c").finish();
        let e = SeedHasher::new("t").str("a").str("bc").finish();
        assert_ne!(d, e);
    }
}

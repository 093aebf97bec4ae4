//! Named, independent random substreams derived from one run seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const AVAILABILITY: &str = "availability";
pub const VOTING: &str = "voting";
pub const PLAYBOOK: &str = "playbook";

/// FNV-1a over `bytes`. Stable across platforms and toolchains.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed hash of a sequence of string parts plus a numeric key.
pub fn keyed_hash(parts: &[&str], key: u64) -> u64 {
    let mut h = mix64(key);
    for p in parts {
        h = mix64(h ^ fnv1a(p.as_bytes()));
    }
    h
}

#[derive(Debug, Clone, Copy)]
pub struct Substreams {
    seed: u64,
}

impl Substreams {
    pub fn new(seed: u64) -> Self {
        Substreams { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, name: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(keyed_hash(&[name], self.seed))
    }
}

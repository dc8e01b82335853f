//! Reproducible randomness.
//!
//! Cascades draw their coin flips from a counter-based scheme: the outcome of
//! edge (u, v) in a given stream is a hash of the stream key and the two
//! vertex ids. Draws therefore do not depend on iteration order or on the
//! thread that runs a trial, and two networks that share an edge see the same
//! coin for it in the same stream.
//!
//! Sequential processes (the generator, weight sampling) use ChaCha seeded
//! from the same `(master_seed, stream_index)` pair.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit key for a string (FNV-1a, then mixed).
pub fn str_key(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    mix64(h)
}

const COIN_BITS: u32 = 53;

/// A master seed and a stream index. Together they determine every draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn from_seed(master_seed: u64) -> Self {
        Self::new(master_seed, 0)
    }

    /// Same master seed, stream `stream_index + offset`.
    pub fn offset(self, offset: u64) -> Self {
        Self::new(self.master_seed, self.stream_index.wrapping_add(offset))
    }

    /// An independent family of streams labelled by `label`.
    pub fn child(self, label: u64) -> Self {
        let master = mix64(self.master_seed ^ mix64(self.stream_index.wrapping_add(GOLDEN)) ^ mix64(label ^ 0x5851_F42D_4C95_7F2D));
        Self::new(master, 0)
    }

    /// Child keyed by a string, e.g. a circle id.
    pub fn child_str(self, label: &str) -> Self {
        self.child(str_key(label))
    }

    /// 64-bit key of this stream for counter-based draws.
    #[inline]
    pub fn stream_key(self) -> u64 {
        mix64(mix64(self.master_seed).wrapping_add(mix64(self.stream_index ^ GOLDEN)))
    }

    /// Sequential generator for this stream.
    pub fn chacha(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Uniform integer in [0, 2^53) for the coin of an edge within a stream.
#[inline]
pub(crate) fn coin(stream_key: u64, edge_key: u64) -> u64 {
    mix64(stream_key ^ edge_key) >> (64 - COIN_BITS)
}

/// `coin(..) < coin_threshold(w)` holds exactly when the coin, read as a
/// fraction of 2^53, is below `w`. Weight 1 always passes, weight 0 never.
#[inline]
pub(crate) fn coin_threshold(w: f64) -> u64 {
    (w * (1u64 << COIN_BITS) as f64).ceil() as u64
}

//! Counter-based randomness.
//!
//! Every candidate face gets exactly one uniform, computed as a pure
//! function of `(master_seed, stream_index, dimension, colex rank)`. Draws
//! are therefore order independent, and two parameter values sharing a seed
//! see the same uniforms, which gives the monotone coupling used by scans.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one Monte Carlo trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngSeed { master_seed, stream_index }
    }

    /// Seed of trial `i` under the same master seed.
    pub fn trial(self, i: u64) -> Self {
        RngSeed { stream_index: i, ..self }
    }

    /// A derived seed, for experiments that need several independent
    /// families of trials under one master seed.
    pub fn derive(self, label: u64) -> Self {
        RngSeed {
            master_seed: mix64(self.master_seed ^ mix64(label.wrapping_add(0xD1B5_4A32_D192_ED03))),
            stream_index: self.stream_index,
        }
    }

    /// Key of one family of draws within the trial (one per dimension, or
    /// one per auxiliary purpose).
    pub fn key(self, tag: u64) -> u64 {
        let a = mix64(self.master_seed ^ 0x6A09_E667_F3BC_C908);
        let b = mix64(a ^ self.stream_index.wrapping_mul(GAMMA));
        mix64(b ^ tag.wrapping_mul(0xA076_1D64_78BD_642F).wrapping_add(1))
    }

    pub fn face_draws(self, dim: usize) -> FaceDraws {
        FaceDraws { key: self.key(dim as u64) }
    }

    /// A sequential generator for non-face randomness (point clouds).
    pub fn rng(self, tag: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key(tag ^ 0x5555_0000_0000_0000))
    }
}

/// Random-access uniforms for the faces of one dimension.
#[derive(Clone, Copy, Debug)]
pub struct FaceDraws {
    key: u64,
}

impl FaceDraws {
    #[inline]
    pub fn bits(&self, rank: u64) -> u64 {
        mix64(self.key.wrapping_add(rank.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    #[inline]
    pub fn uniform(&self, rank: u64) -> f64 {
        (self.bits(rank) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `uniform(rank) < p`, the presence test for a face at probability `p`.
    #[inline]
    pub fn present(&self, rank: u64, p: f64) -> bool {
        self.uniform(rank) < p
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colexicographic rank of a strictly increasing vertex list.
#[inline]
pub fn colex_rank(vertices: &[u32]) -> u64 {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v as u64, i as u64 + 1))
        .sum()
}

#[inline]
pub fn edge_rank(a: u32, b: u32) -> u64 {
    debug_assert!(a < b);
    let b = b as u64;
    b * (b - 1) / 2 + a as u64
}

#[inline]
pub fn triangle_rank(a: u32, b: u32, c: u32) -> u64 {
    debug_assert!(a < b && b < c);
    let (b, c) = (b as u64, c as u64);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a as u64
}

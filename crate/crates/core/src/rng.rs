//! Seeded randomness shared by every sampling path.
//!
//! All draws come from `ChaCha20Rng` (rand_chacha) seeded with
//! `SeedableRng::seed_from_u64`. Uniform variates take the top 53 bits of
//! `next_u64` and scale by 2^-53, so a given seed yields the same stream on
//! every platform and build.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type SimRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)`.
pub fn unit_interval(rng: &mut SimRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Inverse-CDF draw of an index from `probs`.
///
/// If rounding leaves the cumulative sum below the uniform draw, the last
/// index with non-zero probability is returned.
pub fn draw_index(rng: &mut SimRng, probs: &[f64]) -> usize {
    let u = unit_interval(rng);
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

//! Mapping from raw 64-bit draws to the random quantities a split needs.
//!
//! Every split consumes, in order: one draw for the split dimension, one for
//! the split value, then `d` draws per synthetic point (coordinates in
//! dimension order). Keeping the mapping explicit, rather than going through
//! `rand`'s distribution machinery, pins the exact sequence of values a given
//! stream of `u64`s produces, so a recorded stream can be replayed.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Uniform draw in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * UNIT_SCALE
}

/// Uniform index in `0..n`. `n` must be positive.
#[inline]
pub fn index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    ((unit(rng) * n as f64) as usize).min(n - 1)
}

/// Uniform value in `[lo, hi]`; returns `lo` when the interval is degenerate.
#[inline]
pub fn between<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u = unit(rng);
    (lo + (hi - lo) * u).min(hi)
}

/// Independent stream for tree `tree_index` of a forest seeded with
/// `master_seed`. Streams never overlap: ChaCha's 64-bit stream id selects
/// the tree.
pub fn tree_rng(master_seed: u64, tree_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(tree_index);
    rng
}

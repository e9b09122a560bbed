//! Seeded randomness.
//!
//! Every random choice in the crate is drawn from ChaCha20 (`rand_chacha::ChaCha20Rng`)
//! seeded with `seed_from_u64(seed)`. Independent streams for parallel workers use the
//! same key with the stream number set to the worker index, so the sequence for a given
//! `(seed, stream)` is stable across runs and platforms.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn rng_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform `size`-subset of `0..n`, returned sorted.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    let mut v = sample(rng, n, size).into_vec();
    v.sort_unstable();
    v
}

/// Partial Fisher-Yates: the first `size` entries of a uniformly shuffled `0..n`.
pub fn fisher_yates_prefix<R: Rng + ?Sized>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(size);
    idx
}

//! Synthetic workloads for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rocqe_core::{Dataset, Label, Orientation};

/// A dataset of `p` positives and `n` negatives whose integer scores overlap
/// partially, with ties, like a 0-100 QE score column.
pub fn synthetic(p: usize, n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<_> = (0..p + n)
        .map(|i| {
            let positive = i < p;
            let centre = if positive { 60.0 } else { 80.0 };
            let score = (centre + rng.random_range(-30.0..30.0f64))
                .round()
                .clamp(0.0, 100.0);
            let label = if positive {
                Label::Positive
            } else {
                Label::Negative
            };
            (format!("s{i}"), label, score)
        })
        .collect();
    Dataset::from_raw(rows, Orientation::HigherIsBetter).expect("finite scores")
}

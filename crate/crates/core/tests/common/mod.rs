#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rocqe_core::{Dataset, Label, Orientation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random small dataset with both classes present and plenty of ties.
pub fn random_dataset(rng: &mut ChaCha8Rng, max_len: usize) -> Dataset {
    let len = rng.random_range(2..=max_len);
    let levels = rng.random_range(1..=8);
    let orientation = if rng.random_bool(0.5) {
        Orientation::HigherIsBetter
    } else {
        Orientation::HigherIsWorse
    };
    let mut labels: Vec<Label> = (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Label::Positive
            } else {
                Label::Negative
            }
        })
        .collect();
    labels[0] = Label::Positive;
    labels[1] = Label::Negative;
    let rows: Vec<_> = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            (
                format!("s{i:03}"),
                l,
                rng.random_range(0..levels) as f64 * 0.5 - 1.0,
            )
        })
        .collect();
    Dataset::from_raw(rows, orientation).unwrap()
}

/// Tie-adjusted pairwise statistic: the share of (positive, negative)
/// pairs where the positive is ranked riskier, ties counting one half.
pub fn pairwise_auc(d: &Dataset) -> f64 {
    let pos: Vec<f64> = d
        .segments()
        .iter()
        .filter(|s| s.label.is_positive())
        .map(|s| s.risk_score)
        .collect();
    let neg: Vec<f64> = d
        .segments()
        .iter()
        .filter(|s| !s.label.is_positive())
        .map(|s| s.risk_score)
        .collect();
    let mut wins = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    wins / (pos.len() * neg.len()) as f64
}

/// Brute-force (tp, fp) when flagging every segment with risk >= threshold.
pub fn recount(d: &Dataset, threshold: f64) -> (usize, usize) {
    let flagged = d.segments().iter().filter(|s| s.risk_score >= threshold);
    flagged.fold((0, 0), |(tp, fp), s| {
        if s.label.is_positive() {
            (tp + 1, fp)
        } else {
            (tp, fp + 1)
        }
    })
}

pub fn fixture(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

/// The ten-segment worked example: QE scores where higher is better.
pub fn worked_example() -> Dataset {
    let (records, _) = rocqe_core::parse_canonical_tsv(
        &fixture("worked_example/gold.tsv"),
        &fixture("worked_example/scores.tsv"),
        "qe",
        rocqe_core::ParseMode::Strict,
    )
    .unwrap();
    rocqe_core::to_dataset(
        &records,
        rocqe_core::SeverityCutoff::StrictAnyError,
        Orientation::HigherIsBetter,
        "qe",
    )
    .unwrap()
    .0
}

/// Binormal scores: positives drawn from N(mu, 1), negatives from N(0, 1),
/// higher meaning riskier.
pub fn binormal(rng: &mut ChaCha8Rng, p: usize, n: usize, mu: f64) -> Dataset {
    use rand_distr::{Distribution, StandardNormal};
    let rows: Vec<_> = (0..p + n)
        .map(|i| {
            let z: f64 = StandardNormal.sample(rng);
            if i < p {
                (format!("p{i}"), Label::Positive, z + mu)
            } else {
                (format!("n{i}"), Label::Negative, z)
            }
        })
        .collect();
    Dataset::from_raw(rows, Orientation::HigherIsWorse).unwrap()
}

//! Nonparametric stratified bootstrap for ROC confidence bands and AUC
//! confidence intervals.
//!
//! Each replicate redraws the positives `P` times and the negatives `N`
//! times with replacement, builds a ROC curve and its AUC, and interpolates
//! the curve onto a shared FPR grid. Pointwise percentiles of the `B`
//! interpolated curves give the band; percentiles of the `B` AUC values give
//! the interval.
//!
//! Replicate `i` draws from its own ChaCha8 stream, keyed by `(seed, i)`, and
//! results are gathered in replicate order. Serial and parallel execution
//! therefore produce bit-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Dataset, ScoredSegment};
use crate::roc::{auc, build_roc, interpolate, vertices_auc, vertices_from_scored};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    /// Number of replicates, B.
    pub iterations: usize,
    /// Two-sided confidence level in (0, 1).
    pub confidence: f64,
    pub seed: u64,
    /// Number of FPR grid intervals. `None` uses `max(N, 100)`, i.e. a step
    /// of about 1/N.
    pub grid_points: Option<usize>,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            iterations: 1000,
            confidence: 0.95,
            seed: 0,
            grid_points: None,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 2 {
            return Err(Error::InvalidArgument(format!(
                "bootstrap needs at least 2 iterations, got {}",
                self.iterations
            )));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        if self.grid_points == Some(0) {
            return Err(Error::InvalidArgument(
                "grid needs at least one interval".into(),
            ));
        }
        Ok(())
    }

    /// Uniform FPR grid from 0 to 1 inclusive.
    pub fn fpr_grid(&self, n_count: usize) -> Vec<f64> {
        let intervals = self.grid_points.unwrap_or(n_count.max(100)).max(1);
        (0..=intervals)
            .map(|i| i as f64 / intervals as f64)
            .collect()
    }

    /// Lower and upper percentile levels, e.g. 0.025 and 0.975 for 95%.
    pub fn percentile_levels(&self) -> (f64, f64) {
        let tail = (1.0 - self.confidence) / 2.0;
        (tail, 1.0 - tail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBand {
    pub fpr_grid: Vec<f64>,
    pub lower_tpr: Vec<f64>,
    pub upper_tpr: Vec<f64>,
    /// AUC of the original (not resampled) dataset.
    pub auc_point: f64,
    pub auc_interval: (f64, f64),
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapOutcome {
    pub band: ConfidenceBand,
    /// Per-replicate AUC values in replicate order.
    pub replicate_aucs: Vec<f64>,
    /// Replicates in which every risk score tied; they contribute the
    /// chance diagonal.
    pub degenerate_replicates: usize,
}

/// Random stream for one replicate.
pub fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

/// Nearest-rank percentile of sorted values: the smallest value with at
/// least `q * len` values at or below it.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of an empty sample");
    let len = sorted.len();
    // The small slack keeps q * len at an exact integer from rounding up,
    // e.g. 0.975 * 1000.
    let rank = (q * len as f64 - 1e-9).ceil().clamp(1.0, len as f64) as usize;
    sorted[rank - 1]
}

fn strata(dataset: &Dataset) -> Result<(Vec<&ScoredSegment>, Vec<&ScoredSegment>)> {
    dataset.require_both_classes()?;
    Ok(dataset
        .segments()
        .iter()
        .partition(|s| s.label.is_positive()))
}

fn draw<'a, T, R: Rng + ?Sized>(
    pool: &'a [T],
    count: usize,
    rng: &'a mut R,
) -> impl Iterator<Item = &'a T> + 'a {
    (0..count).map(move |_| &pool[rng.random_range(0..pool.len())])
}

/// One stratified resample: exactly `P` positives and `N` negatives drawn
/// with replacement from their own class.
pub fn resample_stratified<R: Rng + ?Sized>(dataset: &Dataset, rng: &mut R) -> Result<Dataset> {
    let (pos, neg) = strata(dataset)?;
    let mut segments = Vec::with_capacity(dataset.len());
    segments.extend(draw(&pos, pos.len(), rng).map(|s| (*s).clone()));
    segments.extend(draw(&neg, neg.len(), rng).map(|s| (*s).clone()));
    Dataset::new(segments, dataset.orientation())
}

/// Runs `f` on each of `config.iterations` stratified resamples and returns
/// the results in replicate order.
pub fn run_replicates<T, F>(
    dataset: &Dataset,
    config: &BootstrapConfig,
    execution: Execution,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Dataset) -> T + Sync + Send,
{
    config.validate()?;
    dataset.require_both_classes()?;
    let one = |i: usize| -> Result<T> {
        let mut rng = replicate_rng(config.seed, i);
        Ok(f(&resample_stratified(dataset, &mut rng)?))
    };
    match execution {
        Execution::Serial => (0..config.iterations).map(one).collect(),
        Execution::Parallel => (0..config.iterations).into_par_iter().map(one).collect(),
    }
}

struct Replicate {
    auc: f64,
    tpr: Vec<f64>,
    degenerate: bool,
}

pub fn confidence_band(dataset: &Dataset, config: &BootstrapConfig) -> Result<BootstrapOutcome> {
    confidence_band_with(dataset, config, Execution::Parallel)
}

pub fn confidence_band_with(
    dataset: &Dataset,
    config: &BootstrapConfig,
    execution: Execution,
) -> Result<BootstrapOutcome> {
    config.validate()?;
    let (pos, neg) = strata(dataset)?;
    let (p, n) = (pos.len(), neg.len());
    let grid = config.fpr_grid(n);
    let auc_point = auc(&build_roc(dataset)?);

    // Resampled curves only need (risk, label) pairs; skipping the segment
    // clones keeps large replicate counts cheap.
    let pos_risk: Vec<f64> = pos.iter().map(|s| s.risk_score).collect();
    let neg_risk: Vec<f64> = neg.iter().map(|s| s.risk_score).collect();
    let one = |i: usize| {
        let mut rng = replicate_rng(config.seed, i);
        let mut scored = Vec::with_capacity(p + n);
        scored.extend(draw(&pos_risk, p, &mut rng).map(|&r| (r, true)));
        scored.extend(draw(&neg_risk, n, &mut rng).map(|&r| (r, false)));
        let vertices = vertices_from_scored(scored, p, n);
        Replicate {
            auc: vertices_auc(&vertices),
            tpr: grid
                .iter()
                .map(|&x| interpolate(&vertices, x, |v| (v.fpr, v.tpr)))
                .collect(),
            degenerate: vertices.len() == 2,
        }
    };
    let replicates: Vec<Replicate> = match execution {
        Execution::Serial => (0..config.iterations).map(one).collect(),
        Execution::Parallel => (0..config.iterations).into_par_iter().map(one).collect(),
    };

    let (lo_q, hi_q) = config.percentile_levels();
    let mut column = vec![0.0; replicates.len()];
    let mut lower_tpr = Vec::with_capacity(grid.len());
    let mut upper_tpr = Vec::with_capacity(grid.len());
    for g in 0..grid.len() {
        for (slot, r) in column.iter_mut().zip(&replicates) {
            *slot = r.tpr[g];
        }
        column.sort_unstable_by(f64::total_cmp);
        lower_tpr.push(nearest_rank(&column, lo_q));
        upper_tpr.push(nearest_rank(&column, hi_q));
    }

    let replicate_aucs: Vec<f64> = replicates.iter().map(|r| r.auc).collect();
    let mut sorted_aucs = replicate_aucs.clone();
    sorted_aucs.sort_unstable_by(f64::total_cmp);

    Ok(BootstrapOutcome {
        band: ConfidenceBand {
            fpr_grid: grid,
            lower_tpr,
            upper_tpr,
            auc_point,
            auc_interval: (
                nearest_rank(&sorted_aucs, lo_q),
                nearest_rank(&sorted_aucs, hi_q),
            ),
            confidence: config.confidence,
        },
        degenerate_replicates: replicates.iter().filter(|r| r.degenerate).count(),
        replicate_aucs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandWidth {
    pub max_width: f64,
    pub mean_width: f64,
}

pub fn band_width_summary(band: &ConfidenceBand) -> BandWidth {
    let widths = band
        .upper_tpr
        .iter()
        .zip(&band.lower_tpr)
        .map(|(u, l)| u - l);
    let (max_width, sum) = widths.fold((0.0f64, 0.0), |(m, s), w| (m.max(w), s + w));
    let count = band.fpr_grid.len().max(1);
    BandWidth {
        max_width,
        mean_width: sum / count as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Label, Orientation};

    fn worked_example() -> Dataset {
        use Label::*;
        Dataset::from_raw(
            [
                ("1", Positive, 95.0),
                ("2", Negative, 95.0),
                ("3", Negative, 100.0),
                ("4", Negative, 95.0),
                ("5", Positive, 25.0),
                ("6", Positive, 93.0),
                ("7", Positive, 100.0),
                ("8", Positive, 99.0),
                ("9", Negative, 75.0),
                ("10", Positive, 99.0),
            ],
            Orientation::HigherIsBetter,
        )
        .unwrap()
    }

    #[test]
    fn nearest_rank_percentiles() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(nearest_rank(&v, 0.025), 25.0);
        assert_eq!(nearest_rank(&v, 0.975), 975.0);
        assert_eq!(nearest_rank(&v, 0.0), 1.0);
        assert_eq!(nearest_rank(&v, 1.0), 1000.0);
        assert_eq!(nearest_rank(&[3.0, 7.0], 0.5), 3.0);
    }

    #[test]
    fn grid_defaults() {
        let c = BootstrapConfig::default();
        let g = c.fpr_grid(4);
        assert_eq!(g.len(), 101);
        assert_eq!((g[0], g[100]), (0.0, 1.0));
        assert_eq!(c.fpr_grid(378).len(), 379);
        let c = BootstrapConfig {
            grid_points: Some(10),
            ..c
        };
        assert_eq!(c.fpr_grid(1000).len(), 11);
    }

    #[test]
    fn config_validation() {
        let bad = [
            BootstrapConfig {
                iterations: 1,
                ..Default::default()
            },
            BootstrapConfig {
                confidence: 1.0,
                ..Default::default()
            },
            BootstrapConfig {
                confidence: 0.0,
                ..Default::default()
            },
            BootstrapConfig {
                grid_points: Some(0),
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(confidence_band(&worked_example(), &c).is_err(), "{c:?}");
        }
    }

    #[test]
    fn resample_keeps_strata() {
        let d = worked_example();
        for seed in 0..20 {
            let r = resample_stratified(&d, &mut replicate_rng(seed, 0)).unwrap();
            assert_eq!((r.p_count(), r.n_count()), (6, 4));
            for s in r.segments() {
                let original = d
                    .segments()
                    .iter()
                    .find(|o| o.segment_id == s.segment_id)
                    .unwrap();
                assert_eq!(original, s);
            }
        }
        let a = resample_stratified(&d, &mut replicate_rng(9, 3)).unwrap();
        let b = resample_stratified(&d, &mut replicate_rng(9, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn resample_single_pair_is_identity() {
        let d = Dataset::from_raw(
            [("p", Label::Positive, 1.0), ("n", Label::Negative, 0.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        for i in 0..5 {
            let r = resample_stratified(&d, &mut replicate_rng(1, i)).unwrap();
            assert_eq!(r, d);
        }
    }

    #[test]
    fn degenerate_stratum_rejected() {
        let d =
            Dataset::from_raw([("p", Label::Positive, 1.0)], Orientation::HigherIsWorse).unwrap();
        assert!(resample_stratified(&d, &mut replicate_rng(0, 0)).is_err());
        assert!(confidence_band(&d, &BootstrapConfig::default()).is_err());
    }

    #[test]
    fn perfect_separation_band() {
        let rows: Vec<_> = (0..20)
            .map(|i| {
                let label = if i < 8 {
                    Label::Positive
                } else {
                    Label::Negative
                };
                (
                    format!("s{i}"),
                    label,
                    if i < 8 {
                        10.0 + i as f64
                    } else {
                        i as f64 - 20.0
                    },
                )
            })
            .collect();
        let d = Dataset::from_raw(rows, Orientation::HigherIsWorse).unwrap();
        let out = confidence_band(
            &d,
            &BootstrapConfig {
                iterations: 200,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.band.auc_interval, (1.0, 1.0));
        assert!(out.band.lower_tpr.iter().all(|&t| t == 1.0));
        assert!(out.band.upper_tpr.iter().all(|&t| t == 1.0));
        let w = band_width_summary(&out.band);
        assert_eq!((w.max_width, w.mean_width), (0.0, 0.0));
    }

    #[test]
    fn all_tied_replicates_counted() {
        let d = Dataset::from_raw(
            [
                ("a", Label::Positive, 1.0),
                ("b", Label::Negative, 1.0),
                ("c", Label::Negative, 1.0),
            ],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        let out = confidence_band(
            &d,
            &BootstrapConfig {
                iterations: 50,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.degenerate_replicates, 50);
        assert_eq!(out.band.auc_interval, (0.5, 0.5));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let d = worked_example();
        let c = BootstrapConfig {
            iterations: 300,
            seed: 17,
            ..Default::default()
        };
        let a = confidence_band_with(&d, &c, Execution::Serial).unwrap();
        let b = confidence_band_with(&d, &c, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn band_matches_replicate_runner() {
        // The fast path must resample exactly like resample_stratified.
        let d = worked_example();
        let c = BootstrapConfig {
            iterations: 64,
            seed: 5,
            ..Default::default()
        };
        let out = confidence_band(&d, &c).unwrap();
        let slow =
            run_replicates(&d, &c, Execution::Serial, |r| auc(&build_roc(r).unwrap())).unwrap();
        assert_eq!(out.replicate_aucs, slow);
    }
}

//! QE-ROC tables and the review-planning questions they answer.
//!
//! A QE-ROC table lists segments from worst to best QE score; each row shows
//! the confusion counts obtained when every segment scoring worse than or
//! equal to that row is sent for review. Tie groups are atomic: a review set
//! contains a whole group of equally scored segments or none of it.

use serde::Serialize;

use crate::bootstrap::{nearest_rank, run_replicates, BootstrapConfig, ConfidenceBand, Execution};
use crate::error::{Error, Result};
use crate::model::{rates, ConfusionCounts, Dataset, Label, Orientation};
use crate::roc::RocCurve;

#[derive(Debug, Clone, PartialEq)]
pub struct QeRocRow {
    pub segment_id: String,
    pub ground_truth: Label,
    pub raw_score: f64,
    pub counts: ConfusionCounts,
    pub tpr: f64,
    pub fpr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QeRocTable {
    pub rows: Vec<QeRocRow>,
    pub p_count: usize,
    pub n_count: usize,
}

impl QeRocTable {
    /// The theoretical `(tpr, fpr)` endpoints framing the data rows.
    pub fn endpoints(&self) -> [(f64, f64); 2] {
        [(0.0, 0.0), (1.0, 1.0)]
    }
}

pub fn qe_roc_table(dataset: &Dataset) -> Result<QeRocTable> {
    dataset.require_both_classes()?;
    let (p, n) = (dataset.p_count(), dataset.n_count());
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let segs = dataset.segments();
    // Stable: rows within a tie group keep their input order.
    order.sort_by(|&a, &b| segs[b].risk_score.total_cmp(&segs[a].risk_score));

    let mut rows = Vec::with_capacity(order.len());
    let (mut tp, mut fp) = (0, 0);
    let mut group_start = 0;
    for (k, &i) in order.iter().enumerate() {
        if segs[i].label.is_positive() {
            tp += 1;
        } else {
            fp += 1;
        }
        let ends_group = order
            .get(k + 1)
            .is_none_or(|&j| segs[j].risk_score != segs[i].risk_score);
        if !ends_group {
            continue;
        }
        let counts = ConfusionCounts::new(tp, p - tp, fp, n - fp);
        let r = rates(&counts)?;
        for &g in &order[group_start..=k] {
            rows.push(QeRocRow {
                segment_id: segs[g].segment_id.clone(),
                ground_truth: segs[g].label,
                raw_score: segs[g].raw_score,
                counts,
                tpr: r.tpr,
                fpr: r.fpr,
            });
        }
        group_start = k + 1;
    }
    Ok(QeRocTable {
        rows,
        p_count: p,
        n_count: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Fixed review budget; estimate the residual risk.
    ReviewBudget,
    /// Fixed risk target; estimate the review effort.
    RiskTarget,
    /// Cost-optimal operating point.
    OptimalThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    /// Re-run the scenario on every bootstrap replicate.
    #[default]
    Replicate,
    /// Read bounds off the ROC confidence band.
    Band,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionReport {
    pub scenario: Scenario,
    /// Threshold on the QE system's scale; `None` when nothing is reviewed.
    pub threshold_raw: Option<f64>,
    pub threshold_canonical: Option<f64>,
    pub review_fraction: f64,
    pub reviewed_segments: usize,
    pub residual_fn_per_100: f64,
    pub counts: ConfusionCounts,
    /// Interval for the scenario's answer: residual errors per 100 for the
    /// review-budget scenario, review fraction for the risk-target one.
    pub ci: Option<(f64, f64)>,
    pub notes: Vec<String>,
}

/// Options shared by both review scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioOptions {
    /// Share of errors in reviewed segments that reviewers actually fix.
    pub review_efficacy: f64,
    pub ci: Option<(BootstrapConfig, CiMethod)>,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        ScenarioOptions {
            review_efficacy: 1.0,
            ci: None,
        }
    }
}

impl ScenarioOptions {
    fn validate(&self) -> Result<()> {
        if !(self.review_efficacy > 0.0 && self.review_efficacy <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "review efficacy must lie in (0, 1], got {}",
                self.review_efficacy
            )));
        }
        if let Some((cfg, _)) = &self.ci {
            cfg.validate()?;
        }
        Ok(())
    }
}

/// A candidate review set: every tie group up to and including one.
#[derive(Debug, Clone, Copy)]
struct Boundary {
    threshold: Option<f64>,
    counts: ConfusionCounts,
}

/// Review-set boundaries from the empty set up to the whole sample.
fn boundaries(dataset: &Dataset) -> Vec<Boundary> {
    let (p, n) = (dataset.p_count(), dataset.n_count());
    let mut scored: Vec<(f64, bool)> = dataset
        .segments()
        .iter()
        .map(|s| (s.risk_score, s.label.is_positive()))
        .collect();
    scored.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let mut out = vec![Boundary {
        threshold: None,
        counts: ConfusionCounts::new(0, p, 0, n),
    }];
    let (mut tp, mut fp) = (0, 0);
    for (k, &(risk, positive)) in scored.iter().enumerate() {
        if positive {
            tp += 1;
        } else {
            fp += 1;
        }
        if scored.get(k + 1).is_none_or(|next| next.0 != risk) {
            out.push(Boundary {
                threshold: Some(risk),
                counts: ConfusionCounts::new(tp, p - tp, fp, n - fp),
            });
        }
    }
    out
}

/// Errors left after review: missed positives plus flagged positives the
/// reviewers fail to fix.
fn residual_errors(counts: &ConfusionCounts, efficacy: f64) -> f64 {
    counts.fn_ as f64 + (1.0 - efficacy) * counts.tp as f64
}

fn report(
    scenario: Scenario,
    dataset: &Dataset,
    b: &Boundary,
    efficacy: f64,
    notes: Vec<String>,
) -> DecisionReport {
    let total = dataset.len() as f64;
    DecisionReport {
        scenario,
        threshold_raw: b.threshold.map(|t| dataset.orientation().to_raw(t)),
        threshold_canonical: b.threshold,
        review_fraction: b.counts.flagged() as f64 / total,
        reviewed_segments: b.counts.flagged(),
        residual_fn_per_100: residual_errors(&b.counts, efficacy) / total * 100.0,
        counts: b.counts,
        ci: None,
        notes,
    }
}

fn percentile_interval(mut values: Vec<f64>, confidence: f64) -> (f64, f64) {
    values.sort_unstable_by(f64::total_cmp);
    let tail = (1.0 - confidence) / 2.0;
    (
        nearest_rank(&values, tail),
        nearest_rank(&values, 1.0 - tail),
    )
}

fn non_empty(dataset: &Dataset) -> Result<()> {
    if dataset.is_empty() {
        Err(Error::Empty("dataset has no segments".into()))
    } else {
        Ok(())
    }
}

fn scenario1_point(dataset: &Dataset, x: f64, efficacy: f64) -> DecisionReport {
    let total = dataset.len();
    // Slack so that e.g. 0.3 * 10 counts as a capacity of 3.
    let capacity = (x * total as f64 + 1e-9).floor() as usize;
    let all = boundaries(dataset);
    let chosen = all
        .iter()
        .rev()
        .find(|b| b.counts.flagged() <= capacity)
        .expect("the empty review set always fits");
    let mut notes = Vec::new();
    if chosen.threshold.is_none() && capacity > 0 {
        notes.push(format!(
            "review capacity of {capacity} segments is smaller than the worst-scoring tie group; nothing can be reviewed"
        ));
    } else if chosen.counts.flagged() < capacity {
        notes.push(format!(
            "review set of {} segments leaves {} of {capacity} capacity unused to keep tie groups whole",
            chosen.counts.flagged(),
            capacity - chosen.counts.flagged()
        ));
    }
    report(Scenario::ReviewBudget, dataset, chosen, efficacy, notes)
}

/// Residual errors per 100 segments when only the worst-scoring fraction
/// `review_fraction_x` of segments can be reviewed. The review set never
/// exceeds the capacity `floor(x * total)`.
pub fn scenario1_residual_risk(
    dataset: &Dataset,
    review_fraction_x: f64,
    options: &ScenarioOptions,
) -> Result<DecisionReport> {
    options.validate()?;
    non_empty(dataset)?;
    if !(review_fraction_x > 0.0 && review_fraction_x <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "review fraction must lie in (0, 1], got {review_fraction_x}"
        )));
    }
    let mut out = scenario1_point(dataset, review_fraction_x, options.review_efficacy);
    if let Some((cfg, method)) = &options.ci {
        out.ci = Some(match method {
            CiMethod::Replicate => {
                let values = run_replicates(dataset, cfg, Execution::Parallel, |r| {
                    scenario1_point(r, review_fraction_x, options.review_efficacy)
                        .residual_fn_per_100
                })?;
                percentile_interval(values, cfg.confidence)
            }
            CiMethod::Band => {
                let band = crate::bootstrap::confidence_band(dataset, cfg)?.band;
                scenario1_band_bounds(dataset, &out, &band, options.review_efficacy)?
            }
        });
    }
    Ok(out)
}

/// Residual-risk bounds from the band: `FN = (1 - tpr_bound) * P` at the
/// chosen operating point's FPR.
fn scenario1_band_bounds(
    dataset: &Dataset,
    point: &DecisionReport,
    band: &ConfidenceBand,
    efficacy: f64,
) -> Result<(f64, f64)> {
    let r = rates(&point.counts)?;
    let at = |tprs: &[f64]| {
        crate::roc::interpolate(
            &band
                .fpr_grid
                .iter()
                .zip(tprs)
                .map(|(&x, &y)| (x, y))
                .collect::<Vec<_>>(),
            r.fpr,
            |&(x, y)| (x, y),
        )
    };
    let p = dataset.p_count() as f64;
    let total = dataset.len() as f64;
    let per_100 = |tpr: f64| ((1.0 - tpr) * p + (1.0 - efficacy) * tpr * p) / total * 100.0;
    Ok((per_100(at(&band.upper_tpr)), per_100(at(&band.lower_tpr))))
}

fn scenario2_point(dataset: &Dataset, y: f64, efficacy: f64) -> DecisionReport {
    let budget = y / 100.0 * dataset.len() as f64;
    let all = boundaries(dataset);
    let mut notes = vec![format!("tolerable residual errors in sample: {budget}")];
    let chosen = match all
        .iter()
        .find(|b| residual_errors(&b.counts, efficacy) <= budget + 1e-9)
    {
        Some(b) => b,
        None => {
            notes.push(
                "risk target is unattainable at this review efficacy; reviewing everything".into(),
            );
            all.last().expect("at least the empty review set")
        }
    };
    report(Scenario::RiskTarget, dataset, chosen, efficacy, notes)
}

/// Share of segments that must be reviewed so that at most
/// `tolerable_fn_per_100_y` errors per 100 segments remain.
pub fn scenario2_required_effort(
    dataset: &Dataset,
    tolerable_fn_per_100_y: f64,
    options: &ScenarioOptions,
) -> Result<DecisionReport> {
    options.validate()?;
    non_empty(dataset)?;
    if !(0.0..=100.0).contains(&tolerable_fn_per_100_y) {
        return Err(Error::InvalidArgument(format!(
            "tolerable errors per 100 must lie in [0, 100], got {tolerable_fn_per_100_y}"
        )));
    }
    let y = tolerable_fn_per_100_y;
    let mut out = scenario2_point(dataset, y, options.review_efficacy);
    if let Some((cfg, method)) = &options.ci {
        out.ci = Some(match method {
            CiMethod::Replicate => {
                let values = run_replicates(dataset, cfg, Execution::Parallel, |r| {
                    scenario2_point(r, y, options.review_efficacy).review_fraction
                })?;
                percentile_interval(values, cfg.confidence)
            }
            CiMethod::Band => {
                let band = crate::bootstrap::confidence_band(dataset, cfg)?.band;
                scenario2_band_bounds(dataset, y, &band, options.review_efficacy)
            }
        });
    }
    Ok(out)
}

/// Review-fraction bounds from the band: the smallest grid FPR at which the
/// bound curve reaches the TPR needed to meet the budget.
fn scenario2_band_bounds(
    dataset: &Dataset,
    y: f64,
    band: &ConfidenceBand,
    efficacy: f64,
) -> (f64, f64) {
    let (p, n) = (dataset.p_count() as f64, dataset.n_count() as f64);
    let total = dataset.len() as f64;
    let budget = y / 100.0 * total;
    // Residual = (1 - tpr) * P + (1 - e) * tpr * P <= budget.
    let needed = ((p - budget) / (efficacy * p)).clamp(0.0, 1.0);
    let fraction = |tprs: &[f64]| {
        if needed <= 0.0 {
            return 0.0;
        }
        band.fpr_grid
            .iter()
            .zip(tprs)
            .find(|(_, &t)| t >= needed - 1e-12)
            .map_or(1.0, |(&fpr, _)| ((needed * p + fpr * n) / total).min(1.0))
    };
    (fraction(&band.upper_tpr), fraction(&band.lower_tpr))
}

/// Relative monetary value of a false negative and a false positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeOff {
    fn_unit_cost: f64,
    fp_unit_cost: f64,
}

impl TradeOff {
    pub fn new(fn_unit_cost: f64, fp_unit_cost: f64) -> Result<Self> {
        if !(fn_unit_cost > 0.0 && fp_unit_cost > 0.0)
            || !fn_unit_cost.is_finite()
            || !fp_unit_cost.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "unit costs must be positive and finite, got FN={fn_unit_cost}, FP={fp_unit_cost}"
            )));
        }
        Ok(TradeOff {
            fn_unit_cost,
            fp_unit_cost,
        })
    }

    /// From an "`a` FN to `b` FP" exchange rate, e.g. 1:10 when one missed
    /// error costs as much as ten needless reviews.
    pub fn from_exchange(fn_count: f64, fp_count: f64) -> Result<Self> {
        TradeOff::new(fp_count, fn_count)
    }

    pub fn fn_unit_cost(&self) -> f64 {
        self.fn_unit_cost
    }

    pub fn fp_unit_cost(&self) -> f64 {
        self.fp_unit_cost
    }
}

/// Proportion of error-containing to error-free segments, `p : n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassRatio {
    p: f64,
    n: f64,
}

impl ClassRatio {
    pub fn new(p: f64, n: f64) -> Result<Self> {
        if !(p > 0.0 && n > 0.0) || !p.is_finite() || !n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "class ratio terms must be positive and finite, got {p}:{n}"
            )));
        }
        Ok(ClassRatio { p, n })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// Slope of the iso-performance lines: the FN:FP exchange rate divided by
/// the P:N ratio.
pub fn iso_performance_slope(trade_off: &TradeOff, ratio: &ClassRatio) -> f64 {
    (trade_off.fp_unit_cost / trade_off.fn_unit_cost) / (ratio.p / ratio.n)
}

/// Picks the curve vertex where an iso-performance line touches the curve
/// furthest to the north-west, i.e. the vertex maximizing `tpr - m * fpr`.
/// Near-equal objectives resolve toward the lower FPR.
pub fn optimal_threshold(
    curve: &RocCurve,
    trade_off: &TradeOff,
    ratio: &ClassRatio,
) -> DecisionReport {
    let m = iso_performance_slope(trade_off, ratio);
    let objective = |v: &crate::roc::RocVertex| v.tpr - m * v.fpr;
    let mut best = &curve.vertices()[0];
    let mut best_value = objective(best);
    for v in &curve.vertices()[1..] {
        let value = objective(v);
        let tol = 1e-12 * value.abs().max(best_value.abs()).max(1.0);
        if value > best_value + tol {
            best = v;
            best_value = value;
        }
    }
    let total = (curve.p_count() + curve.n_count()) as f64;
    let threshold = best.threshold.is_finite().then_some(best.threshold);
    let orientation: Orientation = curve.orientation();
    DecisionReport {
        scenario: Scenario::OptimalThreshold,
        threshold_raw: threshold.map(|t| orientation.to_raw(t)),
        threshold_canonical: threshold,
        review_fraction: best.counts.flagged() as f64 / total,
        reviewed_segments: best.counts.flagged(),
        residual_fn_per_100: best.counts.fn_ as f64 / total * 100.0,
        counts: best.counts,
        ci: None,
        notes: vec![
            format!("iso-performance slope m = {m}"),
            format!(
                "objective tpr - m*fpr = {best_value} at (fpr={}, tpr={})",
                best.fpr, best.tpr
            ),
        ],
    }
}

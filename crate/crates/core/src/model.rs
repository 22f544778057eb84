//! Domain types shared by every analysis: labels, score orientation,
//! scored segments, datasets and confusion counts.
//!
//! All scores are carried in two forms. The *raw* score is whatever the QE
//! system emitted. The *risk* score is the canonical form in which a higher
//! value always means "more likely to contain an error"; it equals the raw
//! score for systems where higher is worse and its negation otherwise.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Ground-truth class of a segment. `Positive` means the segment contains at
/// least one error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }

    /// Column wording used in QE-ROC tables.
    pub fn table_name(self) -> &'static str {
        match self {
            Label::Positive => "error",
            Label::Negative => "no error",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Positive => f.write_str("positive"),
            Label::Negative => f.write_str("negative"),
        }
    }
}

/// Direction of a QE score column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    HigherIsWorse,
    HigherIsBetter,
}

impl Orientation {
    /// Maps a canonical risk score back to the raw score scale.
    pub fn to_raw(self, risk: f64) -> f64 {
        // Negation is its own inverse.
        canonicalize(risk, self)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::HigherIsWorse => f.write_str("higher-worse"),
            Orientation::HigherIsBetter => f.write_str("higher-better"),
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "higher-worse" | "higher-is-worse" => Ok(Orientation::HigherIsWorse),
            "higher-better" | "higher-is-better" => Ok(Orientation::HigherIsBetter),
            other => Err(Error::InvalidArgument(format!(
                "unknown orientation {other:?} (expected higher-better or higher-worse)"
            ))),
        }
    }
}

/// Converts a raw QE score to the canonical risk scale.
///
/// Negative zero is normalized to positive zero so that `0.0` and `-0.0`
/// raw scores fall into the same tie group and print identically.
pub fn canonicalize(raw_score: f64, orientation: Orientation) -> f64 {
    let risk = match orientation {
        Orientation::HigherIsWorse => raw_score,
        Orientation::HigherIsBetter => -raw_score,
    };
    risk + 0.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSegment {
    pub segment_id: String,
    pub label: Label,
    pub raw_score: f64,
    pub risk_score: f64,
}

impl ScoredSegment {
    pub fn new(
        segment_id: impl Into<String>,
        label: Label,
        raw_score: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        let segment_id = segment_id.into();
        if !raw_score.is_finite() {
            return Err(Error::NonFiniteScore {
                segment_id,
                value: raw_score,
            });
        }
        Ok(ScoredSegment {
            segment_id,
            label,
            raw_score,
            risk_score: canonicalize(raw_score, orientation),
        })
    }
}

/// An ordered collection of scored segments for one QE metric, with class
/// totals. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    segments: Vec<ScoredSegment>,
    orientation: Orientation,
    p_count: usize,
    n_count: usize,
}

impl Dataset {
    /// Builds a dataset from already-canonicalized segments. The segments'
    /// risk scores must agree with `orientation`.
    pub fn new(segments: Vec<ScoredSegment>, orientation: Orientation) -> Result<Self> {
        for s in &segments {
            if !s.risk_score.is_finite() {
                return Err(Error::NonFiniteScore {
                    segment_id: s.segment_id.clone(),
                    value: s.risk_score,
                });
            }
        }
        let p_count = segments.iter().filter(|s| s.label.is_positive()).count();
        let n_count = segments.len() - p_count;
        Ok(Dataset {
            segments,
            orientation,
            p_count,
            n_count,
        })
    }

    /// Convenience constructor from `(id, label, raw score)` triples.
    pub fn from_raw<I, S>(rows: I, orientation: Orientation) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Label, f64)>,
        S: Into<String>,
    {
        let segments = rows
            .into_iter()
            .map(|(id, label, raw)| ScoredSegment::new(id, label, raw, orientation))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(segments, orientation)
    }

    pub fn segments(&self) -> &[ScoredSegment] {
        &self.segments
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn p_count(&self) -> usize {
        self.p_count
    }

    pub fn n_count(&self) -> usize {
        self.n_count
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// True when either class is empty, in which case no ROC curve exists.
    pub fn is_degenerate(&self) -> bool {
        self.p_count == 0 || self.n_count == 0
    }

    /// Fails with [`Error::DegenerateClass`] naming the empty class.
    pub fn require_both_classes(&self) -> Result<()> {
        if self.p_count == 0 {
            Err(Error::DegenerateClass {
                class: Label::Positive,
            })
        } else if self.n_count == 0 {
            Err(Error::DegenerateClass {
                class: Label::Negative,
            })
        } else {
            Ok(())
        }
    }

    /// Digest of the sorted `(segment_id, label)` pairs. Two datasets with
    /// the same fingerprint share one ground-truth labeling.
    pub fn fingerprint(&self) -> String {
        let mut pairs: Vec<(&str, Label)> = self
            .segments
            .iter()
            .map(|s| (s.segment_id.as_str(), s.label))
            .collect();
        pairs.sort_unstable();
        let mut hasher = Sha256::new();
        for (id, label) in pairs {
            hasher.update(id.as_bytes());
            hasher.update([0u8, if label.is_positive() { 1 } else { 0 }, 0xff]);
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Copy of the dataset sorted by segment id; used to compare datasets
    /// regardless of input line order.
    pub fn sorted_by_id(&self) -> Dataset {
        let mut segments = self.segments.clone();
        segments.sort_by(|a, b| a.segment_id.cmp(&b.segment_id));
        Dataset { segments, ..*self }
    }
}

/// Two-by-two confusion matrix at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, fn_: usize, fp: usize, tn: usize) -> Self {
        ConfusionCounts { tp, fn_, fp, tn }
    }

    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.fp + self.tn
    }

    /// Number of segments flagged as error-containing.
    pub fn flagged(&self) -> usize {
        self.tp + self.fp
    }

    pub fn total(&self) -> usize {
        self.positives() + self.negatives()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub tpr: f64,
    pub fpr: f64,
    pub fnr: f64,
    /// `None` when nothing is flagged (tp + fp = 0): precision is undefined.
    pub precision: Option<f64>,
    pub recall: f64,
}

pub fn rates(c: &ConfusionCounts) -> Result<Rates> {
    if c.positives() == 0 {
        return Err(Error::DegenerateClass {
            class: Label::Positive,
        });
    }
    if c.negatives() == 0 {
        return Err(Error::DegenerateClass {
            class: Label::Negative,
        });
    }
    let tpr = c.tp as f64 / c.positives() as f64;
    let fpr = c.fp as f64 / c.negatives() as f64;
    let precision = match c.flagged() {
        0 => None,
        flagged => Some(c.tp as f64 / flagged as f64),
    };
    Ok(Rates {
        tpr,
        fpr,
        fnr: 1.0 - tpr,
        precision,
        recall: tpr,
    })
}

/// Expected false-negative and false-positive counts for a sample with `p`
/// positives and `n` negatives, given the two error rates.
pub fn counts_from_rates(fnr: f64, fpr: f64, p: i64, n: i64) -> Result<(f64, f64)> {
    if p < 0 || n < 0 {
        return Err(Error::InvalidArgument(format!(
            "class counts must be non-negative (p={p}, n={n})"
        )));
    }
    for (name, rate) in [("fnr", fnr), ("fpr", fpr)] {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidArgument(format!(
                "{name} must lie in [0, 1], got {rate}"
            )));
        }
    }
    Ok((fnr * p as f64, fpr * n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(0.92, Orientation::HigherIsBetter), -0.92);
        assert_eq!(canonicalize(-3.0, Orientation::HigherIsWorse), -3.0);
        let z = canonicalize(0.0, Orientation::HigherIsBetter);
        assert_eq!(z.to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn non_finite_score_names_segment() {
        let err = ScoredSegment::new(
            "seg-7",
            Label::Positive,
            f64::NAN,
            Orientation::HigherIsWorse,
        )
        .unwrap_err();
        assert!(err.to_string().contains("seg-7"));
    }

    #[test]
    fn rates_table_rows() {
        let r = rates(&ConfusionCounts::new(5, 1, 3, 1)).unwrap();
        assert_abs_diff_eq!(r.tpr, 5.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.fpr, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!((r.tpr * 1e4).round() / 1e4, 0.8333);

        let r = rates(&ConfusionCounts::new(2, 4, 1, 3)).unwrap();
        assert_abs_diff_eq!(r.precision.unwrap(), 2.0 / 3.0, epsilon = 1e-12);

        let r = rates(&ConfusionCounts::new(6, 0, 0, 4)).unwrap();
        assert_eq!((r.tpr, r.fpr, r.precision), (1.0, 0.0, Some(1.0)));
    }

    #[test]
    fn rates_degenerate_and_undefined_precision() {
        match rates(&ConfusionCounts::new(0, 0, 1, 3)) {
            Err(Error::DegenerateClass { class }) => assert_eq!(class, Label::Positive),
            other => panic!("unexpected {other:?}"),
        }
        match rates(&ConfusionCounts::new(1, 1, 0, 0)) {
            Err(Error::DegenerateClass { class }) => assert_eq!(class, Label::Negative),
            other => panic!("unexpected {other:?}"),
        }
        let r = rates(&ConfusionCounts::new(0, 6, 0, 4)).unwrap();
        assert_eq!(r.precision, None);
    }

    #[test]
    fn counts_from_rates_examples() {
        let (fn_, fp) = counts_from_rates(0.17, 0.0, 6, 4).unwrap();
        assert_abs_diff_eq!(fn_, 1.02, epsilon = 1e-12);
        assert_eq!(fp, 0.0);
        assert_eq!(counts_from_rates(0.0, 0.0, 6, 4).unwrap(), (0.0, 0.0));
        assert_eq!(counts_from_rates(1.0, 1.0, 6, 4).unwrap(), (6.0, 4.0));
        assert!(counts_from_rates(0.1, 0.1, -1, 4).is_err());
        assert!(counts_from_rates(1.1, 0.1, 1, 4).is_err());
    }

    #[test]
    fn dataset_tallies_and_fingerprint() {
        let d = Dataset::from_raw(
            [("a", Label::Positive, 1.0), ("b", Label::Negative, 2.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        assert_eq!((d.p_count(), d.n_count()), (1, 1));
        let shuffled = Dataset::from_raw(
            [("b", Label::Negative, 7.0), ("a", Label::Positive, 3.0)],
            Orientation::HigherIsBetter,
        )
        .unwrap();
        assert_eq!(d.fingerprint(), shuffled.fingerprint());
        let relabeled = Dataset::from_raw(
            [("a", Label::Negative, 1.0), ("b", Label::Negative, 2.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        assert_ne!(d.fingerprint(), relabeled.fingerprint());
    }

    proptest! {
        #[test]
        fn negation_reverses_order(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            prop_assume!(a < b);
            prop_assert!(canonicalize(a, Orientation::HigherIsBetter) > canonicalize(b, Orientation::HigherIsBetter));
        }

        #[test]
        fn canonicalize_is_involution(x in -1e9f64..1e9) {
            let twice = canonicalize(canonicalize(x, Orientation::HigherIsBetter), Orientation::HigherIsBetter);
            prop_assert_eq!(twice, x + 0.0);
        }

        #[test]
        fn rates_scale_free(tp in 0usize..50, fn_ in 0usize..50, fp in 0usize..50, tn in 0usize..50, k in 1usize..20) {
            prop_assume!(tp + fn_ > 0 && fp + tn > 0);
            let a = rates(&ConfusionCounts::new(tp, fn_, fp, tn)).unwrap();
            let b = rates(&ConfusionCounts::new(tp * k, fn_ * k, fp * k, tn * k)).unwrap();
            prop_assert_eq!(a.tpr, b.tpr);
            prop_assert_eq!(a.fpr, b.fpr);
            prop_assert_eq!(a.fnr, b.fnr);
            prop_assert_eq!(a.precision, b.precision);
            prop_assert_eq!(a.fnr + a.tpr, 1.0);
        }
    }
}

//! MQM-style annotations to binary ground truth.
//!
//! Segment scores follow the WMT convention: error points are summed per
//! segment (no word-count normalization) and reported as a negative number,
//! so an error-free segment scores 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MqmSeverity {
    MajorNonTranslation,
    Major,
    MinorFluencyOrPunctuation,
    MinorOther,
    Neutral,
}

impl MqmSeverity {
    /// Error points charged per occurrence.
    pub fn weight(self) -> f64 {
        match self {
            MqmSeverity::MajorNonTranslation => 25.0,
            MqmSeverity::Major => 5.0,
            MqmSeverity::MinorFluencyOrPunctuation => 0.1,
            MqmSeverity::MinorOther => 1.0,
            MqmSeverity::Neutral => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MqmErrorMark {
    severity: MqmSeverity,
    count: u32,
}

impl MqmErrorMark {
    pub fn new(severity: MqmSeverity, count: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "an MQM error mark needs a count of at least 1".into(),
            ));
        }
        Ok(MqmErrorMark { severity, count })
    }

    pub fn severity(&self) -> MqmSeverity {
        self.severity
    }

    pub fn count(&self) -> u32 {
        self.count
    }
}

/// Aggregates error marks into a (non-positive) segment score.
pub fn mqm_segment_score(marks: &[MqmErrorMark]) -> f64 {
    -marks
        .iter()
        .map(|m| m.severity.weight() * f64::from(m.count))
        .sum::<f64>()
}

/// Rule turning an MQM segment score into a label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeverityCutoff {
    /// Positive iff score < 0: any error at all, however minor.
    StrictAnyError,
    /// Positive iff score ≤ −5: tolerates a few minor errors.
    Lenient,
    /// Positive iff score < threshold (or ≤ when inclusive).
    Custom { threshold: f64, inclusive: bool },
}

impl SeverityCutoff {
    pub fn custom(threshold: f64, inclusive: bool) -> Result<Self> {
        if !threshold.is_finite() || threshold > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "custom cutoff must be a finite value <= 0, got {threshold}"
            )));
        }
        Ok(SeverityCutoff::Custom {
            threshold,
            inclusive,
        })
    }
}

impl std::str::FromStr for SeverityCutoff {
    type Err = Error;

    /// Accepts `strict`, `lenient`, `custom:<t>` and `custom:<t>:inclusive`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => return Ok(SeverityCutoff::StrictAnyError),
            "lenient" => return Ok(SeverityCutoff::Lenient),
            _ => {}
        }
        let bad = || Error::InvalidArgument(format!("unrecognized cutoff {s:?}"));
        let rest = s.strip_prefix("custom:").ok_or_else(bad)?;
        let (value, inclusive) = match rest.strip_suffix(":inclusive") {
            Some(v) => (v, true),
            None => (rest, false),
        };
        let threshold: f64 = value.parse().map_err(|_| bad())?;
        SeverityCutoff::custom(threshold, inclusive)
    }
}

pub fn label(mqm_score: f64, cutoff: SeverityCutoff) -> Label {
    let positive = match cutoff {
        SeverityCutoff::StrictAnyError => mqm_score < 0.0,
        SeverityCutoff::Lenient => mqm_score <= -5.0,
        SeverityCutoff::Custom {
            threshold,
            inclusive: true,
        } => mqm_score <= threshold,
        SeverityCutoff::Custom {
            threshold,
            inclusive: false,
        } => mqm_score < threshold,
    };
    if positive {
        Label::Positive
    } else {
        Label::Negative
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    pub labels: Vec<(String, Label)>,
    pub p_count: usize,
    pub n_count: usize,
    pub warnings: Vec<String>,
}

/// Labels every segment. Positive MQM scores are unexpected under the
/// negative-points convention; they are labeled normally and reported.
pub fn label_dataset<'a, I>(scores: I, cutoff: SeverityCutoff) -> Result<LabeledSet>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut out = LabeledSet {
        labels: Vec::new(),
        p_count: 0,
        n_count: 0,
        warnings: Vec::new(),
    };
    for (id, score) in scores {
        if score > 0.0 {
            out.warnings
                .push(format!("segment {id}: positive MQM score {score}"));
        }
        let l = label(score, cutoff);
        match l {
            Label::Positive => out.p_count += 1,
            Label::Negative => out.n_count += 1,
        }
        out.labels.push((id.to_string(), l));
    }
    if out.labels.is_empty() {
        return Err(Error::Empty("no MQM scores to label".into()));
    }
    Ok(out)
}

//! Checks for datasets and bands on which ROC analysis is unreliable.
//! Findings are advisory; nothing here changes an analysis result.

use serde::Serialize;

use crate::bootstrap::{band_width_summary, ConfidenceBand};
use crate::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    #[serde(rename = "MIN_CLASS_BELOW_50")]
    MinClassBelow50,
    DegenerateClass,
    AllTied,
    BandTooWide,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsConfig {
    /// Smallest class size considered enough for a stable curve.
    pub min_class_size: usize,
    /// Largest acceptable pointwise band width. Chosen default, not an
    /// established statistical criterion.
    pub max_band_width: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            min_class_size: 50,
            max_band_width: 0.5,
        }
    }
}

/// Included in every report: sample representativeness cannot be verified
/// mechanically.
pub const REPRESENTATIVENESS_NOTE: &str = "Results transfer to production data only if this sample matches it in language pair, domain, content type and translation source, and is large enough; this cannot be checked automatically.";

pub const MT_RANKING_NOTE: &str = "AUC values of one QE system across MT systems show which outputs are harder for the QE system, not which MT system translates better; do not rank MT systems with them.";

pub fn check_sample(dataset: &Dataset, config: &DiagnosticsConfig) -> Vec<Finding> {
    let (p, n) = (dataset.p_count(), dataset.n_count());
    let mut out = Vec::new();
    if p == 0 || n == 0 {
        let empty = if p == 0 {
            "error-containing (positive)"
        } else {
            "error-free (negative)"
        };
        out.push(Finding {
            code: FindingCode::DegenerateClass,
            message: format!("no {empty} segments (P={p}, N={n}); ROC analysis is undefined"),
        });
    }
    let min = p.min(n);
    if min < config.min_class_size {
        let class = if p <= n { "positive" } else { "negative" };
        out.push(Finding {
            code: FindingCode::MinClassBelow50,
            message: format!(
                "only {min} {class} segments (P={p}, N={n}); at least {} per class are recommended for a stable curve",
                config.min_class_size
            ),
        });
    }
    if let Some(first) = dataset.segments().first() {
        if dataset.len() > 1
            && dataset
                .segments()
                .iter()
                .all(|s| s.risk_score == first.risk_score)
        {
            out.push(Finding {
                code: FindingCode::AllTied,
                message: "every segment has the same QE score; the curve is the chance diagonal"
                    .into(),
            });
        }
    }
    out
}

pub fn check_band(band: &ConfidenceBand, config: &DiagnosticsConfig) -> Vec<Finding> {
    let width = band_width_summary(band);
    if width.max_width > config.max_band_width {
        vec![Finding {
            code: FindingCode::BandTooWide,
            message: format!(
                "confidence band is {:.3} wide at its widest (limit {}); the sample is too small or too noisy for ROC analysis, augment it with additional representative segments",
                width.max_width, config.max_band_width
            ),
        }]
    } else {
        Vec::new()
    }
}

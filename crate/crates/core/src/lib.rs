//! ROC analysis for translation quality-estimation (QE) systems.
//!
//! A QE system is treated as a binary classifier of segments into
//! error-containing (positive) and error-free (negative). Ground truth comes
//! from MQM annotations via a severity cutoff; the QE score is swept as the
//! decision threshold. The crate builds tie-aware ROC curves, their AUC and
//! bootstrap confidence bands, and answers review-planning questions from
//! the resulting QE-ROC table.
//!
//! ```
//! use rocqe_core::{build_roc, auc, Dataset, Label, Orientation};
//!
//! let data = Dataset::from_raw(
//!     [("a", Label::Positive, 12.0), ("b", Label::Negative, 80.0), ("c", Label::Positive, 55.0)],
//!     Orientation::HigherIsBetter,
//! )?;
//! let curve = build_roc(&data)?;
//! assert_eq!(auc(&curve), 1.0);
//! # Ok::<(), rocqe_core::Error>(())
//! ```

pub mod bootstrap;
pub mod decision;
pub mod diagnostics;
pub mod error;
pub mod groundtruth;
pub mod ingest;
pub mod model;
pub mod roc;

pub use bootstrap::{
    band_width_summary, confidence_band, confidence_band_with, resample_stratified, BandWidth,
    BootstrapConfig, BootstrapOutcome, ConfidenceBand, Execution,
};
pub use decision::{
    iso_performance_slope, optimal_threshold, qe_roc_table, scenario1_residual_risk,
    scenario2_required_effort, CiMethod, ClassRatio, DecisionReport, QeRocRow, QeRocTable,
    Scenario, ScenarioOptions, TradeOff,
};
pub use diagnostics::{check_band, check_sample, DiagnosticsConfig, Finding, FindingCode};
pub use error::{Error, Result};
pub use groundtruth::{
    label, label_dataset, mqm_segment_score, MqmErrorMark, MqmSeverity, SeverityCutoff,
};
pub use ingest::{
    parse_canonical_tsv, parse_wmt_layout, to_dataset, write_canonical_tsv, CanonicalRecord, Gold,
    IngestReport, ParseMode, WmtQuery,
};
pub use model::{
    canonicalize, counts_from_rates, rates, ConfusionCounts, Dataset, Label, Orientation, Rates,
    ScoredSegment,
};
pub use roc::{
    auc, build_roc, convex_hull, f1_at, partial_auc, pr_points, HullRegion, HullVertex, PartialAuc,
    PrPoint, RocCurve, RocHull, RocVertex,
};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rocqe",
    version,
    about = "ROC analysis of translation quality-estimation scores"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ROC vertices, AUC and optional confidence band per metric.
    Roc(RocArgs),
    /// Per-segment QE-ROC table for one metric.
    Table(TableArgs),
    /// Review-budget, risk-target or cost-optimal threshold decisions.
    Scenario(ScenarioArgs),
    /// Convex hull over two or more metrics scored on the same segments.
    Hull(HullArgs),
    /// Class counts, band width and other reliability checks.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Tsv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Gold file: segment id and MQM score or label per line.
    #[arg(long, value_name = "PATH")]
    pub gold: Option<PathBuf>,
    /// Score file for one metric; repeat for several metrics.
    #[arg(long = "scores", value_name = "METRIC=PATH")]
    pub scores: Vec<String>,
    /// Score direction for each metric.
    #[arg(long = "orientation", value_name = "METRIC=higher-better|higher-worse")]
    pub orientations: Vec<String>,
    /// MQM labeling rule.
    #[arg(
        long,
        value_name = "strict|lenient|custom:T[:inclusive]",
        default_value = "strict"
    )]
    pub cutoff: String,
    /// Fail on malformed lines instead of skipping them.
    #[arg(long)]
    pub strict: bool,
    /// Root of an mt-metrics-eval data tree.
    #[arg(long, value_name = "DIR")]
    pub wmt_root: Option<PathBuf>,
    #[arg(long, value_name = "LP")]
    pub lang_pair: Option<String>,
    #[arg(long, value_name = "NAME")]
    pub testset: Option<String>,
    /// MT system whose segments are analyzed.
    #[arg(long, value_name = "NAME")]
    pub system: Option<String>,
    /// QE metric to read from the data tree; repeat for several metrics.
    #[arg(long = "metric", value_name = "NAME")]
    pub metrics: Vec<String>,
    /// Human score name in the data tree.
    #[arg(long, value_name = "NAME", default_value = "mqm")]
    pub gold_name: String,
}

#[derive(Debug, Clone, Args)]
pub struct BootstrapArgs {
    /// Number of bootstrap replicates; omit to skip resampling.
    #[arg(long = "bootstrap", value_name = "B")]
    pub iterations: Option<usize>,
    #[arg(long, value_name = "C", default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long, value_name = "S", env = "ROCQE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// FPR grid intervals for the band; defaults to max(N, 100).
    #[arg(long, value_name = "K")]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report destination; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct RocArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub bootstrap: BootstrapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also draw the curves as SVG.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioKind {
    /// Residual errors for a fixed review capacity.
    #[value(name = "1")]
    Budget,
    /// Review effort for a tolerable residual error rate.
    #[value(name = "2")]
    Risk,
    /// Cost-minimizing threshold.
    #[value(name = "optimal")]
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CiMethodArg {
    Replicate,
    Band,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub bootstrap: BootstrapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum)]
    pub scenario: ScenarioKind,
    /// Review capacity as a share, e.g. `30%` or `0.3`.
    #[arg(long, value_name = "SHARE")]
    pub x: Option<String>,
    /// Tolerable residual errors per 100 segments.
    #[arg(long, value_name = "PER_100")]
    pub y: Option<String>,
    /// `A:B` when A false negatives cost as much as B false positives.
    #[arg(long, value_name = "A:B")]
    pub trade_off: Option<String>,
    /// Expected positives to negatives in production; defaults to the sample's.
    #[arg(long, value_name = "P:N")]
    pub class_ratio: Option<String>,
    /// Share of errors in reviewed segments that reviewers fix.
    #[arg(long, value_name = "E", default_value_t = 1.0)]
    pub review_efficacy: f64,
    #[arg(long, value_enum, default_value_t = CiMethodArg::Replicate)]
    pub ci_method: CiMethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct HullArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub bootstrap: BootstrapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Smallest acceptable class size.
    #[arg(long, value_name = "N", default_value_t = 50)]
    pub min_class_size: usize,
    /// Widest acceptable pointwise band.
    #[arg(long, value_name = "W", default_value_t = 0.5)]
    pub max_band_width: f64,
}

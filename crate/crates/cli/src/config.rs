//! Resolution of command-line flags into an analysis configuration, and
//! loading of the configured inputs.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rocqe_core::{
    parse_canonical_tsv, parse_wmt_layout, to_dataset, BootstrapConfig, Dataset, IngestReport,
    Orientation, ParseMode, SeverityCutoff, WmtQuery,
};
use serde::Serialize;

use crate::args::{BootstrapArgs, Format, InputArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Canonical {
        gold: PathBuf,
        scores: BTreeMap<String, PathBuf>,
    },
    Wmt {
        root: PathBuf,
        language_pair: String,
        testset: String,
        system: String,
        gold_name: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapEcho {
    pub iterations: usize,
    pub confidence: f64,
    pub seed: u64,
    pub grid_points: Option<usize>,
}

impl From<&BootstrapConfig> for BootstrapEcho {
    fn from(c: &BootstrapConfig) -> Self {
        BootstrapEcho {
            iterations: c.iterations,
            confidence: c.confidence,
            seed: c.seed,
            grid_points: c.grid_points,
        }
    }
}

/// Everything a command needs, validated before any input is read.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub source: Source,
    /// Metric names in command-line order.
    pub metrics: Vec<String>,
    pub orientations: BTreeMap<String, Orientation>,
    pub cutoff: SeverityCutoff,
    pub parse_mode: ParseMode,
    pub bootstrap: Option<BootstrapConfig>,
    pub format: Format,
    pub plot: Option<PathBuf>,
}

/// Configuration as echoed into every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub source: Source,
    pub metrics: Vec<String>,
    pub orientations: BTreeMap<String, String>,
    pub cutoff: SeverityCutoff,
    pub parse_mode: ParseMode,
    pub bootstrap: Option<BootstrapEcho>,
    pub format: &'static str,
    pub svg: Option<PathBuf>,
}

impl AnalysisConfig {
    pub fn resolve(
        input: &InputArgs,
        bootstrap: Option<BootstrapConfig>,
        format: Format,
        plot: Option<PathBuf>,
    ) -> CliResult<Self> {
        let (source, metrics) = resolve_source(input)?;
        let orientations = resolve_orientations(&input.orientations, &metrics)?;
        let cutoff: SeverityCutoff = input
            .cutoff
            .parse()
            .map_err(|e: rocqe_core::Error| CliError::Config(e.to_string()))?;
        if let Some(b) = &bootstrap {
            b.validate()?;
        }
        Ok(AnalysisConfig {
            source,
            metrics,
            orientations,
            cutoff,
            parse_mode: if input.strict {
                ParseMode::Strict
            } else {
                ParseMode::Lenient
            },
            bootstrap,
            format,
            plot,
        })
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            source: self.source.clone(),
            metrics: self.metrics.clone(),
            orientations: self
                .orientations
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            cutoff: self.cutoff,
            parse_mode: self.parse_mode,
            bootstrap: self.bootstrap.as_ref().map(BootstrapEcho::from),
            format: self.format.as_str(),
            svg: self.plot.clone(),
        }
    }
}

/// `None` when no replicate count was given and `default_iterations` is
/// `None` as well.
pub fn resolve_bootstrap(
    args: &BootstrapArgs,
    default_iterations: Option<usize>,
) -> Option<BootstrapConfig> {
    args.iterations
        .or(default_iterations)
        .map(|iterations| BootstrapConfig {
            iterations,
            confidence: args.confidence,
            seed: args.seed,
            grid_points: args.grid_points,
        })
}

fn split_pair<'a>(flag: &str, value: &'a str) -> CliResult<(&'a str, &'a str)> {
    match value.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k, v)),
        _ => Err(CliError::Config(format!(
            "--{flag} expects METRIC=VALUE, got {value:?}"
        ))),
    }
}

fn resolve_source(input: &InputArgs) -> CliResult<(Source, Vec<String>)> {
    let canonical = input.gold.is_some() || !input.scores.is_empty();
    let wmt = input.wmt_root.is_some();
    let mut metrics = Vec::new();
    let mut push = |m: &str| {
        if metrics.iter().any(|x: &String| x == m) {
            Err(CliError::Config(format!("metric {m} given twice")))
        } else {
            metrics.push(m.to_string());
            Ok(())
        }
    };
    match (canonical, wmt) {
        (true, true) => Err(CliError::Config(
            "use either --gold/--scores or --wmt-root, not both".into(),
        )),
        (false, false) => Err(CliError::Config(
            "no input: give --gold with --scores, or --wmt-root".into(),
        )),
        (true, false) => {
            let gold = input
                .gold
                .clone()
                .ok_or_else(|| CliError::Config("--scores needs --gold".into()))?;
            if input.scores.is_empty() {
                return Err(CliError::Config(
                    "--gold needs at least one --scores METRIC=PATH".into(),
                ));
            }
            if !input.metrics.is_empty() {
                return Err(CliError::Config(
                    "--metric applies to --wmt-root input only".into(),
                ));
            }
            let mut scores = BTreeMap::new();
            for s in &input.scores {
                let (metric, path) = split_pair("scores", s)?;
                push(metric)?;
                scores.insert(metric.to_string(), PathBuf::from(path));
            }
            Ok((Source::Canonical { gold, scores }, metrics))
        }
        (false, true) => {
            let need = |v: &Option<String>, flag: &str| {
                v.clone()
                    .ok_or_else(|| CliError::Config(format!("--wmt-root needs --{flag}")))
            };
            if input.metrics.is_empty() {
                return Err(CliError::Config(
                    "--wmt-root needs at least one --metric".into(),
                ));
            }
            for m in &input.metrics {
                push(m)?;
            }
            Ok((
                Source::Wmt {
                    root: input.wmt_root.clone().expect("checked above"),
                    language_pair: need(&input.lang_pair, "lang-pair")?,
                    testset: need(&input.testset, "testset")?,
                    system: need(&input.system, "system")?,
                    gold_name: input.gold_name.clone(),
                },
                metrics,
            ))
        }
    }
}

fn resolve_orientations(
    flags: &[String],
    metrics: &[String],
) -> CliResult<BTreeMap<String, Orientation>> {
    let mut out = BTreeMap::new();
    for f in flags {
        let (metric, dir) = split_pair("orientation", f)?;
        if !metrics.iter().any(|m| m == metric) {
            return Err(CliError::Config(format!(
                "--orientation given for {metric}, which is not an input metric"
            )));
        }
        let o: Orientation = dir
            .parse()
            .map_err(|e: rocqe_core::Error| CliError::Config(e.to_string()))?;
        if out.insert(metric.to_string(), o).is_some() {
            return Err(CliError::Config(format!(
                "orientation of {metric} given twice"
            )));
        }
    }
    // Score direction differs between QE systems and is never guessed.
    if let Some(missing) = metrics.iter().find(|m| !out.contains_key(*m)) {
        return Err(CliError::Config(format!(
            "missing --orientation {missing}=higher-better|higher-worse"
        )));
    }
    Ok(out)
}

/// One metric's joined, labeled and canonicalized input.
#[derive(Debug, Clone)]
pub struct MetricData {
    pub name: String,
    pub dataset: Dataset,
    pub ingest: IngestReport,
}

/// Reads every configured metric. Ingest and labeling warnings end up in
/// each metric's [`IngestReport`].
pub fn load(config: &AnalysisConfig) -> CliResult<Vec<MetricData>> {
    config
        .metrics
        .iter()
        .map(|metric| {
            let (records, mut ingest) = match &config.source {
                Source::Canonical { gold, scores } => {
                    parse_canonical_tsv(gold, &scores[metric], metric, config.parse_mode)?
                }
                Source::Wmt {
                    root,
                    language_pair,
                    testset,
                    system,
                    gold_name,
                } => parse_wmt_layout(
                    &WmtQuery {
                        root: root.clone(),
                        language_pair: language_pair.clone(),
                        testset: testset.clone(),
                        system: system.clone(),
                        metric: metric.clone(),
                        gold_name: gold_name.clone(),
                    },
                    config.parse_mode,
                )?,
            };
            let (dataset, warnings) =
                to_dataset(&records, config.cutoff, config.orientations[metric], metric)?;
            ingest.warnings.extend(warnings);
            Ok(MetricData {
                name: metric.clone(),
                dataset,
                ingest,
            })
        })
        .collect()
}

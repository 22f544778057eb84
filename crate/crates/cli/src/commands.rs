//! The five subcommands. Each resolves its configuration before touching
//! any input, then writes exactly one report.

use std::io::Write;

use rocqe_core::{
    band_width_summary, build_roc, check_band, check_sample, confidence_band, convex_hull,
    optimal_threshold, pr_points, qe_roc_table, scenario1_residual_risk, scenario2_required_effort,
    BootstrapOutcome, CiMethod, ClassRatio, DecisionReport, DiagnosticsConfig, Orientation,
    RocCurve, ScenarioOptions, TradeOff,
};
use serde::Serialize;

use crate::args::{
    CiMethodArg, DiagnoseArgs, Format, HullArgs, RocArgs, ScenarioArgs, ScenarioKind, TableArgs,
};
use crate::config::{load, resolve_bootstrap, AnalysisConfig, MetricData};
use crate::error::{CliError, CliResult};
use crate::report::{emit, finite, opt, Delimited, Envelope, MetricFinding};
use crate::svg::{self, Series};

fn warn(stderr: &mut dyn Write, data: &[MetricData]) {
    for d in data {
        for w in &d.ingest.warnings {
            let _ = writeln!(stderr, "warning: {}: {w}", d.name);
        }
    }
}

fn sample_findings(data: &[MetricData], config: &DiagnosticsConfig) -> Vec<MetricFinding> {
    data.iter()
        .flat_map(|d| {
            check_sample(&d.dataset, config)
                .into_iter()
                .map(|f| MetricFinding::new(&d.name, f))
        })
        .collect()
}

fn separator(format: Format) -> char {
    if format == Format::Csv {
        ','
    } else {
        '\t'
    }
}

fn write_svg(config: &AnalysisConfig, content: impl FnOnce() -> String) -> CliResult<()> {
    match &config.plot {
        Some(path) => std::fs::write(path, content())
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display()))),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct VertexOut {
    /// Threshold on the metric's own scale; `None` at the origin.
    threshold_raw: Option<f64>,
    fpr: f64,
    tpr: f64,
    tp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    fp: usize,
    tn: usize,
}

#[derive(Debug, Serialize)]
struct PrOut {
    threshold_raw: f64,
    recall: f64,
    precision: f64,
}

#[derive(Debug, Serialize)]
struct BandOut {
    iterations: usize,
    confidence: f64,
    seed: u64,
    fpr_grid: Vec<f64>,
    lower_tpr: Vec<f64>,
    upper_tpr: Vec<f64>,
    auc_interval: [f64; 2],
    max_width: f64,
    mean_width: f64,
    degenerate_replicates: usize,
}

#[derive(Debug, Serialize)]
struct MetricRoc {
    name: String,
    orientation: String,
    p_count: usize,
    n_count: usize,
    fingerprint: String,
    auc: f64,
    vertices: Vec<VertexOut>,
    pr_points: Vec<PrOut>,
    band: Option<BandOut>,
}

fn vertices_out(curve: &RocCurve) -> Vec<VertexOut> {
    let o = curve.orientation();
    curve
        .vertices()
        .iter()
        .map(|v| VertexOut {
            threshold_raw: finite(v.raw_threshold(o)),
            fpr: v.fpr,
            tpr: v.tpr,
            tp: v.counts.tp,
            fn_: v.counts.fn_,
            fp: v.counts.fp,
            tn: v.counts.tn,
        })
        .collect()
}

fn band_out(outcome: &BootstrapOutcome, seed: u64, iterations: usize) -> BandOut {
    let b = &outcome.band;
    let w = band_width_summary(b);
    BandOut {
        iterations,
        confidence: b.confidence,
        seed,
        fpr_grid: b.fpr_grid.clone(),
        lower_tpr: b.lower_tpr.clone(),
        upper_tpr: b.upper_tpr.clone(),
        auc_interval: [b.auc_interval.0, b.auc_interval.1],
        max_width: w.max_width,
        mean_width: w.mean_width,
        degenerate_replicates: outcome.degenerate_replicates,
    }
}

#[derive(Serialize)]
struct RocBody {
    metrics: Vec<MetricRoc>,
}

pub fn cmd_roc(args: &RocArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let format = args.output.format.unwrap_or(Format::Json);
    let bootstrap = resolve_bootstrap(&args.bootstrap, None);
    let config = AnalysisConfig::resolve(&args.input, bootstrap, format, args.svg.clone())?;
    let data = load(&config)?;
    warn(stderr, &data);
    let diagnostics = DiagnosticsConfig::default();
    let mut findings = sample_findings(&data, &diagnostics);

    let mut curves = Vec::with_capacity(data.len());
    let mut outcomes = Vec::with_capacity(data.len());
    for d in &data {
        curves.push(build_roc(&d.dataset)?);
        let outcome = match &config.bootstrap {
            Some(b) => {
                let o = confidence_band(&d.dataset, b)?;
                findings.extend(
                    check_band(&o.band, &diagnostics)
                        .into_iter()
                        .map(|f| MetricFinding::new(&d.name, f)),
                );
                Some(o)
            }
            None => None,
        };
        outcomes.push(outcome);
    }

    let content = match format {
        Format::Json => {
            let metrics = data
                .iter()
                .zip(&curves)
                .zip(&outcomes)
                .map(|((d, curve), outcome)| MetricRoc {
                    name: d.name.clone(),
                    orientation: curve.orientation().to_string(),
                    p_count: curve.p_count(),
                    n_count: curve.n_count(),
                    fingerprint: curve.fingerprint().to_string(),
                    auc: rocqe_core::auc(curve),
                    vertices: vertices_out(curve),
                    pr_points: pr_points(curve)
                        .into_iter()
                        .map(|p| PrOut {
                            threshold_raw: curve.orientation().to_raw(p.threshold),
                            recall: p.recall,
                            precision: p.precision,
                        })
                        .collect(),
                    band: outcome.as_ref().map(|o| {
                        let b = config.bootstrap.as_ref().expect("band implies bootstrap");
                        band_out(o, b.seed, b.iterations)
                    }),
                })
                .collect();
            Envelope::new("roc", config.echo(), &data, RocBody { metrics }, findings).to_json()
        }
        Format::Csv | Format::Tsv => {
            let mut w = Delimited::new(separator(format));
            w.row([
                "metric",
                "threshold_raw",
                "fpr",
                "tpr",
                "tp",
                "fn",
                "fp",
                "tn",
            ]);
            for (d, curve) in data.iter().zip(&curves) {
                for v in vertices_out(curve) {
                    w.row([
                        d.name.clone(),
                        opt(v.threshold_raw),
                        v.fpr.to_string(),
                        v.tpr.to_string(),
                        v.tp.to_string(),
                        v.fn_.to_string(),
                        v.fp.to_string(),
                        v.tn.to_string(),
                    ]);
                }
            }
            w.finish()
        }
    };
    emit(args.output.out.as_deref(), stdout, &content)?;
    write_svg(&config, || {
        let series: Vec<Series> = data
            .iter()
            .zip(&curves)
            .zip(&outcomes)
            .map(|((d, curve), o)| Series {
                name: &d.name,
                curve,
                band: o.as_ref().map(|o| &o.band),
            })
            .collect();
        svg::render(&series, None)
    })
}

/// Column names of the QE-ROC table.
pub const TABLE_HEADER: [&str; 9] = [
    "Segment ID",
    "Ground truth",
    "QE score",
    "TP",
    "FN",
    "FP",
    "TN",
    "TPR",
    "FPR",
];

#[derive(Serialize)]
struct TableRowOut {
    segment_id: String,
    ground_truth: &'static str,
    qe_score: f64,
    tp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    fp: usize,
    tn: usize,
    tpr: f64,
    fpr: f64,
}

#[derive(Serialize)]
struct TableBody {
    metric: String,
    p_count: usize,
    n_count: usize,
    rows: Vec<TableRowOut>,
}

pub fn cmd_table(
    args: &TableArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let format = args.output.format.unwrap_or(Format::Tsv);
    let config = AnalysisConfig::resolve(&args.input, None, format, None)?;
    if config.metrics.len() != 1 {
        return Err(CliError::Config(format!(
            "table takes exactly one metric, got {}",
            config.metrics.len()
        )));
    }
    let data = load(&config)?;
    warn(stderr, &data);
    let d = &data[0];
    let table = qe_roc_table(&d.dataset)?;

    let content = match format {
        Format::Json => {
            let rows = table
                .rows
                .iter()
                .map(|r| TableRowOut {
                    segment_id: r.segment_id.clone(),
                    ground_truth: r.ground_truth.table_name(),
                    qe_score: r.raw_score,
                    tp: r.counts.tp,
                    fn_: r.counts.fn_,
                    fp: r.counts.fp,
                    tn: r.counts.tn,
                    tpr: r.tpr,
                    fpr: r.fpr,
                })
                .collect();
            let body = TableBody {
                metric: d.name.clone(),
                p_count: table.p_count,
                n_count: table.n_count,
                rows,
            };
            let findings = sample_findings(&data, &DiagnosticsConfig::default());
            Envelope::new("table", config.echo(), &data, body, findings).to_json()
        }
        Format::Csv | Format::Tsv => {
            let mut w = Delimited::new(separator(format));
            w.row(TABLE_HEADER);
            // Endpoint rows carry rates only: the curve's fixed ends.
            let endpoint = |w: &mut Delimited, rate: f64| {
                let mut fields = vec![String::new(); 7];
                fields.extend([format!("{rate:.2}"), format!("{rate:.2}")]);
                w.row(fields);
            };
            endpoint(&mut w, 0.0);
            for r in &table.rows {
                w.row([
                    r.segment_id.clone(),
                    r.ground_truth.table_name().to_string(),
                    r.raw_score.to_string(),
                    r.counts.tp.to_string(),
                    r.counts.fn_.to_string(),
                    r.counts.fp.to_string(),
                    r.counts.tn.to_string(),
                    format!("{:.2}", r.tpr),
                    format!("{:.2}", r.fpr),
                ]);
            }
            endpoint(&mut w, 1.0);
            w.finish()
        }
    };
    emit(args.output.out.as_deref(), stdout, &content)
}

/// Review capacity as a share: `30%` or `0.3`.
fn parse_share(s: &str) -> CliResult<f64> {
    let bad = || CliError::Config(format!("--x expects a share such as 30% or 0.3, got {s:?}"));
    let v = match s.trim().strip_suffix('%') {
        Some(p) => p.trim().parse::<f64>().map_err(|_| bad())? / 100.0,
        None => {
            let v = s.trim().parse::<f64>().map_err(|_| bad())?;
            if v > 1.0 {
                return Err(bad());
            }
            v
        }
    };
    Ok(v)
}

fn parse_per_100(s: &str) -> CliResult<f64> {
    let t = s.trim();
    t.strip_suffix('%')
        .unwrap_or(t)
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("--y expects errors per 100 segments, got {s:?}")))
}

fn parse_ratio(flag: &str, s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Config(format!("--{flag} expects two numbers as A:B, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Serialize)]
struct ScenarioEcho {
    kind: &'static str,
    x: Option<f64>,
    y: Option<f64>,
    trade_off: Option<(f64, f64)>,
    class_ratio: Option<(f64, f64)>,
    review_efficacy: f64,
    ci_method: Option<&'static str>,
}

#[derive(Serialize)]
struct ScenarioResult {
    metric: String,
    p_count: usize,
    n_count: usize,
    report: DecisionReport,
}

#[derive(Serialize)]
struct ScenarioBody {
    scenario: ScenarioEcho,
    results: Vec<ScenarioResult>,
}

pub fn cmd_scenario(
    args: &ScenarioArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let format = args.output.format.unwrap_or(Format::Json);
    let bootstrap = resolve_bootstrap(&args.bootstrap, None);
    let mut echo = ScenarioEcho {
        kind: "",
        x: None,
        y: None,
        trade_off: None,
        class_ratio: args
            .class_ratio
            .as_deref()
            .map(|r| parse_ratio("class-ratio", r))
            .transpose()?,
        review_efficacy: args.review_efficacy,
        ci_method: None,
    };
    let unused = |flag: &str, given: bool| {
        if given {
            Err(CliError::Config(format!(
                "--{flag} does not apply to --scenario {}",
                match args.scenario {
                    ScenarioKind::Budget => "1",
                    ScenarioKind::Risk => "2",
                    ScenarioKind::Optimal => "optimal",
                }
            )))
        } else {
            Ok(())
        }
    };
    match args.scenario {
        ScenarioKind::Budget => {
            echo.kind = "review_budget";
            let x = args
                .x
                .as_deref()
                .ok_or_else(|| CliError::Config("--scenario 1 needs --x".into()))?;
            echo.x = Some(parse_share(x)?);
            unused("y", args.y.is_some())?;
            unused("trade-off", args.trade_off.is_some())?;
            unused("class-ratio", args.class_ratio.is_some())?;
        }
        ScenarioKind::Risk => {
            echo.kind = "risk_target";
            let y = args
                .y
                .as_deref()
                .ok_or_else(|| CliError::Config("--scenario 2 needs --y".into()))?;
            echo.y = Some(parse_per_100(y)?);
            unused("x", args.x.is_some())?;
            unused("trade-off", args.trade_off.is_some())?;
            unused("class-ratio", args.class_ratio.is_some())?;
        }
        ScenarioKind::Optimal => {
            echo.kind = "optimal_threshold";
            let t = args
                .trade_off
                .as_deref()
                .ok_or_else(|| CliError::Config("--scenario optimal needs --trade-off".into()))?;
            echo.trade_off = Some(parse_ratio("trade-off", t)?);
            unused("x", args.x.is_some())?;
            unused("y", args.y.is_some())?;
            unused("bootstrap", bootstrap.is_some())?;
        }
    }
    let ci_method = match args.ci_method {
        CiMethodArg::Replicate => CiMethod::Replicate,
        CiMethodArg::Band => CiMethod::Band,
    };
    if bootstrap.is_some() {
        echo.ci_method = Some(match ci_method {
            CiMethod::Replicate => "replicate",
            CiMethod::Band => "band",
        });
    }
    let trade_off = echo
        .trade_off
        .map(|(a, b)| TradeOff::from_exchange(a, b))
        .transpose()?;
    let fixed_ratio = echo
        .class_ratio
        .map(|(p, n)| ClassRatio::new(p, n))
        .transpose()?;

    let config = AnalysisConfig::resolve(&args.input, bootstrap, format, None)?;
    let options = ScenarioOptions {
        review_efficacy: args.review_efficacy,
        ci: config.bootstrap.map(|b| (b, ci_method)),
    };
    let data = load(&config)?;
    warn(stderr, &data);

    let mut results = Vec::with_capacity(data.len());
    for d in &data {
        d.dataset.require_both_classes()?;
        let report = match args.scenario {
            ScenarioKind::Budget => {
                scenario1_residual_risk(&d.dataset, echo.x.expect("set above"), &options)?
            }
            ScenarioKind::Risk => {
                scenario2_required_effort(&d.dataset, echo.y.expect("set above"), &options)?
            }
            ScenarioKind::Optimal => {
                let ratio = match fixed_ratio {
                    Some(r) => r,
                    None => {
                        ClassRatio::new(d.dataset.p_count() as f64, d.dataset.n_count() as f64)?
                    }
                };
                optimal_threshold(
                    &build_roc(&d.dataset)?,
                    trade_off.as_ref().expect("set above"),
                    &ratio,
                )
            }
        };
        results.push(ScenarioResult {
            metric: d.name.clone(),
            p_count: d.dataset.p_count(),
            n_count: d.dataset.n_count(),
            report,
        });
    }

    let content = match format {
        Format::Json => {
            let findings = sample_findings(&data, &DiagnosticsConfig::default());
            Envelope::new(
                "scenario",
                config.echo(),
                &data,
                ScenarioBody {
                    scenario: echo,
                    results,
                },
                findings,
            )
            .to_json()
        }
        Format::Csv | Format::Tsv => {
            let mut w = Delimited::new(separator(format));
            w.row([
                "metric",
                "threshold_raw",
                "review_fraction",
                "reviewed_segments",
                "residual_fn_per_100",
                "tp",
                "fn",
                "fp",
                "tn",
                "ci_lower",
                "ci_upper",
            ]);
            for r in &results {
                let c = &r.report.counts;
                w.row([
                    r.metric.clone(),
                    opt(r.report.threshold_raw),
                    r.report.review_fraction.to_string(),
                    r.report.reviewed_segments.to_string(),
                    r.report.residual_fn_per_100.to_string(),
                    c.tp.to_string(),
                    c.fn_.to_string(),
                    c.fp.to_string(),
                    c.tn.to_string(),
                    opt(r.report.ci.map(|c| c.0)),
                    opt(r.report.ci.map(|c| c.1)),
                ]);
            }
            w.finish()
        }
    };
    emit(args.output.out.as_deref(), stdout, &content)
}

#[derive(Serialize)]
struct SystemAuc {
    name: String,
    auc: f64,
}

#[derive(Serialize)]
struct HullVertexOut {
    fpr: f64,
    tpr: f64,
    system: String,
    threshold_raw: Option<f64>,
}

#[derive(Serialize)]
struct HullRegionOut {
    system: String,
    fpr_from: f64,
    fpr_to: f64,
}

#[derive(Serialize)]
struct HullOut {
    auc: f64,
    vertices: Vec<HullVertexOut>,
    regions: Vec<HullRegionOut>,
}

#[derive(Serialize)]
struct HullBody {
    systems: Vec<SystemAuc>,
    hull: HullOut,
}

pub fn cmd_hull(args: &HullArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let format = args.output.format.unwrap_or(Format::Json);
    let config = AnalysisConfig::resolve(&args.input, None, format, args.svg.clone())?;
    if config.metrics.len() < 2 {
        return Err(CliError::Config(format!(
            "hull needs at least two metrics, got {}",
            config.metrics.len()
        )));
    }
    let data = load(&config)?;
    warn(stderr, &data);
    let curves = data
        .iter()
        .map(|d| build_roc(&d.dataset))
        .collect::<Result<Vec<_>, _>>()?;
    let named: Vec<(&str, &RocCurve)> = data.iter().map(|d| d.name.as_str()).zip(&curves).collect();
    let hull = convex_hull(&named)?;
    let orientation = |system: &str| -> Orientation { config.orientations[system] };
    let vertices: Vec<HullVertexOut> = hull
        .vertices()
        .iter()
        .map(|v| HullVertexOut {
            fpr: v.fpr,
            tpr: v.tpr,
            system: v.system.clone(),
            threshold_raw: finite(orientation(&v.system).to_raw(v.threshold)),
        })
        .collect();

    let content = match format {
        Format::Json => {
            let body = HullBody {
                systems: data
                    .iter()
                    .zip(&curves)
                    .map(|(d, c)| SystemAuc {
                        name: d.name.clone(),
                        auc: rocqe_core::auc(c),
                    })
                    .collect(),
                hull: HullOut {
                    auc: hull.auc(),
                    vertices,
                    regions: hull
                        .regions()
                        .into_iter()
                        .map(|r| HullRegionOut {
                            system: r.system,
                            fpr_from: r.fpr_from,
                            fpr_to: r.fpr_to,
                        })
                        .collect(),
                },
            };
            let findings = sample_findings(&data, &DiagnosticsConfig::default());
            Envelope::new("hull", config.echo(), &data, body, findings).to_json()
        }
        Format::Csv | Format::Tsv => {
            let mut w = Delimited::new(separator(format));
            w.row(["fpr", "tpr", "system", "threshold_raw"]);
            for v in &vertices {
                w.row([
                    v.fpr.to_string(),
                    v.tpr.to_string(),
                    v.system.clone(),
                    opt(v.threshold_raw),
                ]);
            }
            w.finish()
        }
    };
    emit(args.output.out.as_deref(), stdout, &content)?;
    write_svg(&config, || {
        let series: Vec<Series> = data
            .iter()
            .zip(&curves)
            .map(|(d, curve)| Series {
                name: &d.name,
                curve,
                band: None,
            })
            .collect();
        svg::render(&series, Some(&hull))
    })
}

#[derive(Serialize)]
struct MetricDiagnosis {
    name: String,
    p_count: usize,
    n_count: usize,
    auc: Option<f64>,
    auc_interval: Option<[f64; 2]>,
    max_band_width: Option<f64>,
    mean_band_width: Option<f64>,
    degenerate_replicates: Option<usize>,
}

#[derive(Serialize)]
struct DiagnoseBody {
    thresholds: DiagnosticsConfig,
    metrics: Vec<MetricDiagnosis>,
}

/// Bootstrap replicates used by `diagnose` when none are requested.
pub const DIAGNOSE_ITERATIONS: usize = 1000;

pub fn cmd_diagnose(
    args: &DiagnoseArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let format = args.output.format.unwrap_or(Format::Json);
    let bootstrap = resolve_bootstrap(&args.bootstrap, Some(DIAGNOSE_ITERATIONS));
    let config = AnalysisConfig::resolve(&args.input, bootstrap, format, None)?;
    if !(args.max_band_width > 0.0 && args.max_band_width.is_finite()) {
        return Err(CliError::Config(format!(
            "--max-band-width must be positive, got {}",
            args.max_band_width
        )));
    }
    let thresholds = DiagnosticsConfig {
        min_class_size: args.min_class_size,
        max_band_width: args.max_band_width,
    };
    let data = load(&config)?;
    warn(stderr, &data);
    let mut findings = sample_findings(&data, &thresholds);
    let b = config.bootstrap.expect("diagnose always resamples");

    let mut metrics = Vec::with_capacity(data.len());
    for d in &data {
        let mut m = MetricDiagnosis {
            name: d.name.clone(),
            p_count: d.dataset.p_count(),
            n_count: d.dataset.n_count(),
            auc: None,
            auc_interval: None,
            max_band_width: None,
            mean_band_width: None,
            degenerate_replicates: None,
        };
        // A missing class is reported as a finding, not an error.
        if !d.dataset.is_degenerate() {
            let outcome = confidence_band(&d.dataset, &b)?;
            let w = band_width_summary(&outcome.band);
            findings.extend(
                check_band(&outcome.band, &thresholds)
                    .into_iter()
                    .map(|f| MetricFinding::new(&d.name, f)),
            );
            m.auc = Some(outcome.band.auc_point);
            m.auc_interval = Some([outcome.band.auc_interval.0, outcome.band.auc_interval.1]);
            m.max_band_width = Some(w.max_width);
            m.mean_band_width = Some(w.mean_width);
            m.degenerate_replicates = Some(outcome.degenerate_replicates);
        }
        metrics.push(m);
    }
    for f in &findings {
        let _ = writeln!(
            stderr,
            "finding: {}: {}",
            f.metric.as_deref().unwrap_or("-"),
            f.message
        );
    }

    let content = match format {
        Format::Json => Envelope::new(
            "diagnose",
            config.echo(),
            &data,
            DiagnoseBody {
                thresholds,
                metrics,
            },
            findings,
        )
        .to_json(),
        Format::Csv | Format::Tsv => {
            let mut w = Delimited::new(separator(format));
            w.row([
                "metric",
                "p_count",
                "n_count",
                "auc",
                "auc_lower",
                "auc_upper",
                "max_band_width",
                "mean_band_width",
                "degenerate_replicates",
                "findings",
            ]);
            for m in &metrics {
                let codes: Vec<String> = findings
                    .iter()
                    .filter(|f| f.metric.as_deref() == Some(m.name.as_str()))
                    .map(|f| {
                        serde_json::to_value(f.code)
                            .expect("codes serialize")
                            .as_str()
                            .unwrap_or_default()
                            .to_string()
                    })
                    .collect();
                w.row([
                    m.name.clone(),
                    m.p_count.to_string(),
                    m.n_count.to_string(),
                    opt(m.auc),
                    opt(m.auc_interval.map(|i| i[0])),
                    opt(m.auc_interval.map(|i| i[1])),
                    opt(m.max_band_width),
                    opt(m.mean_band_width),
                    m.degenerate_replicates
                        .map(|n| n.to_string())
                        .unwrap_or_default(),
                    codes.join(" "),
                ]);
            }
            w.finish()
        }
    };
    emit(args.output.out.as_deref(), stdout, &content)
}

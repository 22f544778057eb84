//! Reading segment-level gold and QE scores.
//!
//! Two inputs are supported:
//!
//! * **Canonical TSV**: a gold file of `segment_id<TAB>mqm_score` rows and a
//!   score file of `segment_id<TAB>score` rows, joined on the segment id. The
//!   gold value may instead be a direct label (`error` / `no error`, or
//!   `positive` / `negative`). A header line is recognized when the second
//!   field of line 1 is neither a number, a label nor a missing marker.
//! * **WMT layout**: the directory tree of the mt-metrics-eval data, where
//!   each `*.seg.score` file lists `system<TAB>score` lines and a system's
//!   lines appear in segment order.
//!
//! `None`, `NA`, an empty field and non-finite numbers count as missing
//! values. Every gold row ends up in exactly one of the accepted or skipped
//! counters of the [`IngestReport`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groundtruth::{label, SeverityCutoff};
use crate::model::{Dataset, Label, Orientation, ScoredSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseMode {
    /// Skip malformed lines and count them.
    #[default]
    Lenient,
    /// Fail on the first malformed line.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gold {
    Mqm(f64),
    Label(Label),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalRecord {
    pub segment_id: String,
    pub gold: Gold,
    pub qe_scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub total_lines: usize,
    pub accepted: usize,
    pub skipped_missing_gold: usize,
    pub skipped_missing_score: usize,
    pub skipped_malformed: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Missing,
    Number(f64),
    Label(Label),
    Malformed(String),
}

fn is_missing_token(t: &str) -> bool {
    matches!(t, "" | "None" | "NA")
}

fn parse_cell(token: &str, allow_label: bool) -> Cell {
    let t = token.trim();
    if is_missing_token(t) {
        return Cell::Missing;
    }
    if allow_label {
        match t.to_ascii_lowercase().as_str() {
            "error" | "positive" => return Cell::Label(Label::Positive),
            "no error" | "negative" => return Cell::Label(Label::Negative),
            _ => {}
        }
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Cell::Number(v),
        Ok(_) => Cell::Missing,
        Err(_) => Cell::Malformed(format!("cannot parse {t:?} as a score")),
    }
}

struct Row {
    line: usize,
    key: String,
    cell: Cell,
}

/// Reads a two-column TSV. Blank lines are ignored. Rows with the wrong
/// field count come back with an empty key and a malformed cell.
fn read_pairs(path: &Path, allow_label: bool, detect_header: bool) -> Result<Vec<Row>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let row = if fields.len() != 2 || fields[0].trim().is_empty() {
            Row {
                line: i + 1,
                key: String::new(),
                cell: Cell::Malformed(format!(
                    "expected two tab-separated fields with a non-empty first field, got {} field(s)",
                    fields.len()
                )),
            }
        } else {
            Row {
                line: i + 1,
                key: fields[0].trim().to_string(),
                cell: parse_cell(fields[1], allow_label),
            }
        };
        if detect_header && i == 0 && !row.key.is_empty() && matches!(row.cell, Cell::Malformed(_))
        {
            continue;
        }
        rows.push(row);
    }
    Ok(rows)
}

fn malformed(path: &Path, line: usize, message: &str) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    }
}

/// Joins a canonical gold file and a score file for one metric.
pub fn parse_canonical_tsv(
    gold_path: &Path,
    scores_path: &Path,
    metric: &str,
    mode: ParseMode,
) -> Result<(Vec<CanonicalRecord>, IngestReport)> {
    let gold_rows = read_pairs(gold_path, true, true)?;
    let score_rows = read_pairs(scores_path, false, true)?;
    let mut report = IngestReport::default();

    let mut scores: HashMap<&str, &Row> = HashMap::with_capacity(score_rows.len());
    for row in &score_rows {
        if row.key.is_empty() {
            if let Cell::Malformed(msg) = &row.cell {
                if mode == ParseMode::Strict {
                    return Err(malformed(scores_path, row.line, msg));
                }
                report.warnings.push(format!(
                    "{}:{}: {msg}; line ignored",
                    scores_path.display(),
                    row.line
                ));
            }
            continue;
        }
        if scores.insert(row.key.as_str(), row).is_some() {
            return Err(Error::DuplicateSegment {
                path: scores_path.to_path_buf(),
                id: row.key.clone(),
                line: row.line,
            });
        }
    }

    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut records = Vec::new();
    for row in &gold_rows {
        report.total_lines += 1;
        if !row.key.is_empty() && !seen.insert(row.key.as_str()) {
            return Err(Error::DuplicateSegment {
                path: gold_path.to_path_buf(),
                id: row.key.clone(),
                line: row.line,
            });
        }
        let gold = match &row.cell {
            Cell::Malformed(msg) => {
                if mode == ParseMode::Strict {
                    return Err(malformed(gold_path, row.line, msg));
                }
                report.skipped_malformed += 1;
                report
                    .warnings
                    .push(format!("{}:{}: {msg}", gold_path.display(), row.line));
                continue;
            }
            Cell::Missing => {
                report.skipped_missing_gold += 1;
                continue;
            }
            Cell::Number(v) => Gold::Mqm(*v),
            Cell::Label(l) => Gold::Label(*l),
        };
        let score = match scores.get(row.key.as_str()).map(|r| (r.line, &r.cell)) {
            None | Some((_, Cell::Missing)) => {
                report.skipped_missing_score += 1;
                continue;
            }
            Some((line, Cell::Malformed(msg))) => {
                if mode == ParseMode::Strict {
                    return Err(malformed(scores_path, line, msg));
                }
                report.skipped_malformed += 1;
                report
                    .warnings
                    .push(format!("{}:{line}: {msg}", scores_path.display()));
                continue;
            }
            Some((_, Cell::Number(v))) => *v,
            Some((_, Cell::Label(_))) => unreachable!("labels are not accepted in score files"),
        };
        report.accepted += 1;
        records.push(CanonicalRecord {
            segment_id: row.key.clone(),
            gold,
            qe_scores: BTreeMap::from([(metric.to_string(), score)]),
        });
    }

    let orphans = scores.keys().filter(|k| !seen.contains(**k)).count();
    if orphans > 0 {
        report.warnings.push(format!(
            "{orphans} score row(s) in {} have no gold entry",
            scores_path.display()
        ));
    }
    Ok((records, report))
}

/// Location of one system's data inside an mt-metrics-eval style tree:
///
/// ```text
/// {root}/{testset}/human-scores/{language_pair}.{gold_name}.seg.score
/// {root}/{testset}/metric-scores/{language_pair}/{metric}.seg.score
/// ```
///
/// When `{metric}.seg.score` is absent, `{metric}-src.seg.score` (the name
/// the repository uses for reference-free metrics) is tried.
#[derive(Debug, Clone, PartialEq)]
pub struct WmtQuery {
    pub root: PathBuf,
    pub language_pair: String,
    pub testset: String,
    pub system: String,
    pub metric: String,
    /// Gold score name, `mqm` by default.
    pub gold_name: String,
}

impl WmtQuery {
    pub fn gold_path(&self) -> PathBuf {
        self.root
            .join(&self.testset)
            .join("human-scores")
            .join(format!(
                "{}.{}.seg.score",
                self.language_pair, self.gold_name
            ))
    }

    pub fn metric_path(&self) -> Result<PathBuf> {
        let dir = self
            .root
            .join(&self.testset)
            .join("metric-scores")
            .join(&self.language_pair);
        for name in [
            format!("{}.seg.score", self.metric),
            format!("{}-src.seg.score", self.metric),
        ] {
            let p = dir.join(name);
            if p.is_file() {
                return Ok(p);
            }
        }
        Err(Error::io(
            dir.join(format!("{}.seg.score", self.metric)),
            std::io::Error::new(std::io::ErrorKind::NotFound, "metric score file not found"),
        ))
    }
}

/// Groups rows by system, keeping line order. A line without a system name
/// cannot be placed in a sequence, so it fails in either parse mode.
fn systems_in(path: &Path, rows: &[Row]) -> Result<BTreeMap<String, Vec<(usize, Cell)>>> {
    let mut out: BTreeMap<String, Vec<(usize, Cell)>> = BTreeMap::new();
    for row in rows {
        if row.key.is_empty() {
            if let Cell::Malformed(msg) = &row.cell {
                return Err(malformed(path, row.line, msg));
            }
        }
        out.entry(row.key.clone())
            .or_default()
            .push((row.line, row.cell.clone()));
    }
    Ok(out)
}

pub fn parse_wmt_layout(
    query: &WmtQuery,
    mode: ParseMode,
) -> Result<(Vec<CanonicalRecord>, IngestReport)> {
    let gold_path = query.gold_path();
    let metric_path = query.metric_path()?;
    let gold = systems_in(&gold_path, &read_pairs(&gold_path, false, false)?)?;
    let metric = systems_in(&metric_path, &read_pairs(&metric_path, false, false)?)?;

    let (Some(gold_seq), Some(metric_seq)) = (gold.get(&query.system), metric.get(&query.system))
    else {
        let available: BTreeSet<String> = gold
            .keys()
            .filter(|k| metric.contains_key(*k))
            .cloned()
            .collect();
        return Err(Error::UnknownSystem {
            requested: query.system.clone(),
            available: available.into_iter().collect(),
        });
    };
    if gold_seq.len() != metric_seq.len() {
        return Err(Error::LengthMismatch {
            system: query.system.clone(),
            gold: gold_seq.len(),
            metric: metric_seq.len(),
        });
    }

    let mut report = IngestReport::default();
    let mut records = Vec::new();
    for (i, ((gline, gcell), (mline, mcell))) in gold_seq.iter().zip(metric_seq).enumerate() {
        report.total_lines += 1;
        let value = match gcell {
            Cell::Number(v) => *v,
            Cell::Missing => {
                report.skipped_missing_gold += 1;
                continue;
            }
            Cell::Malformed(msg) => {
                if mode == ParseMode::Strict {
                    return Err(malformed(&gold_path, *gline, msg));
                }
                report.skipped_malformed += 1;
                report
                    .warnings
                    .push(format!("{}:{gline}: {msg}", gold_path.display()));
                continue;
            }
            Cell::Label(_) => unreachable!("labels are not accepted in WMT score files"),
        };
        let score = match mcell {
            Cell::Number(v) => *v,
            Cell::Missing => {
                report.skipped_missing_score += 1;
                continue;
            }
            Cell::Malformed(msg) => {
                if mode == ParseMode::Strict {
                    return Err(malformed(&metric_path, *mline, msg));
                }
                report.skipped_malformed += 1;
                report
                    .warnings
                    .push(format!("{}:{mline}: {msg}", metric_path.display()));
                continue;
            }
            Cell::Label(_) => unreachable!("labels are not accepted in WMT score files"),
        };
        report.accepted += 1;
        records.push(CanonicalRecord {
            segment_id: format!("{}:{}:{i}", query.testset, query.system),
            gold: Gold::Mqm(value),
            qe_scores: BTreeMap::from([(query.metric.clone(), score)]),
        });
    }
    Ok((records, report))
}

/// Labels records and canonicalizes their scores for `metric`. Returns the
/// dataset together with labeling warnings (positive MQM scores).
pub fn to_dataset(
    records: &[CanonicalRecord],
    cutoff: SeverityCutoff,
    orientation: Orientation,
    metric: &str,
) -> Result<(Dataset, Vec<String>)> {
    if records.is_empty() {
        return Err(Error::Empty(format!(
            "no joinable records for metric {metric}"
        )));
    }
    let mut warnings = Vec::new();
    let mut segments = Vec::with_capacity(records.len());
    for r in records {
        let l = match r.gold {
            Gold::Label(l) => l,
            Gold::Mqm(v) => {
                if v > 0.0 {
                    warnings.push(format!("segment {}: positive MQM score {v}", r.segment_id));
                }
                label(v, cutoff)
            }
        };
        let score = *r.qe_scores.get(metric).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "record {} has no score for metric {metric}",
                r.segment_id
            ))
        })?;
        segments.push(ScoredSegment::new(
            r.segment_id.clone(),
            l,
            score,
            orientation,
        )?);
    }
    Ok((Dataset::new(segments, orientation)?, warnings))
}

/// Writes a dataset as a canonical gold file (direct labels) and score file.
pub fn write_canonical_tsv<G: Write, S: Write>(
    dataset: &Dataset,
    mut gold: G,
    mut scores: S,
) -> std::io::Result<()> {
    for s in dataset.segments() {
        writeln!(gold, "{}\t{}", s.segment_id, s.label.table_name())?;
        writeln!(scores, "{}\t{}", s.segment_id, s.raw_score)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn simple_join() {
        let dir = tempfile::tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "a\t0\nb\t-5\nc\t-0.1\n");
        let s = write(dir.path(), "s.tsv", "c\t0.3\na\t0.9\nb\t0.1\n");
        let (recs, rep) = parse_canonical_tsv(&g, &s, "m", ParseMode::Lenient).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!((rep.total_lines, rep.accepted), (3, 3));
        assert_eq!(recs[1].gold, Gold::Mqm(-5.0));
        assert_eq!(recs[1].qe_scores["m"], 0.1);
    }

    #[test]
    fn header_missing_and_nan() {
        let dir = tempfile::tempdir().unwrap();
        let g = write(
            dir.path(),
            "g.tsv",
            "segment\tmqm\na\tNone\nb\t-1\nc\t0\nd\tNA\n",
        );
        let s = write(dir.path(), "s.tsv", "id\tscore\na\t1\nb\tNaN\nc\t2\n");
        let (recs, rep) = parse_canonical_tsv(&g, &s, "m", ParseMode::Lenient).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(rep.total_lines, 4);
        assert_eq!(rep.skipped_missing_gold, 2);
        assert_eq!(rep.skipped_missing_score, 1);
        assert_eq!(rep.accepted, 1);
    }

    #[test]
    fn malformed_lenient_vs_strict() {
        let dir = tempfile::tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "a\t0\nb\tfoo\nc\t-1\textra\n");
        let s = write(dir.path(), "s.tsv", "a\t1\nb\t2\nc\t3\n");
        let (recs, rep) = parse_canonical_tsv(&g, &s, "m", ParseMode::Lenient).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(rep.skipped_malformed, 2);
        assert_eq!(rep.total_lines, 3);
        match parse_canonical_tsv(&g, &s, "m", ParseMode::Strict) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_fail() {
        let dir = tempfile::tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "a\t0\na\t-1\n");
        let s = write(dir.path(), "s.tsv", "a\t1\n");
        assert!(matches!(
            parse_canonical_tsv(&g, &s, "m", ParseMode::Lenient),
            Err(Error::DuplicateSegment { line: 2, .. })
        ));
        let g = write(dir.path(), "g2.tsv", "a\t0\n");
        let s = write(dir.path(), "s2.tsv", "a\t1\na\t2\n");
        assert!(matches!(
            parse_canonical_tsv(&g, &s, "m", ParseMode::Lenient),
            Err(Error::DuplicateSegment { .. })
        ));
    }

    #[test]
    fn missing_file_names_path() {
        let err = parse_canonical_tsv(
            Path::new("/no/such/gold.tsv"),
            Path::new("/x"),
            "m",
            ParseMode::Lenient,
        )
        .unwrap_err();
        assert!(err.to_string().contains("/no/such/gold.tsv"));
    }

    #[test]
    fn labels_in_gold_column() {
        let dir = tempfile::tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "a\terror\nb\tno error\n");
        let s = write(dir.path(), "s.tsv", "a\t1\nb\t2\n");
        let (recs, _) = parse_canonical_tsv(&g, &s, "m", ParseMode::Strict).unwrap();
        let (d, _) = to_dataset(
            &recs,
            SeverityCutoff::Lenient,
            Orientation::HigherIsBetter,
            "m",
        )
        .unwrap();
        assert_eq!((d.p_count(), d.n_count()), (1, 1));
        assert_eq!(d.segments()[0].risk_score, -1.0);
    }

    #[test]
    fn to_dataset_empty_and_degenerate() {
        assert!(to_dataset(
            &[],
            SeverityCutoff::StrictAnyError,
            Orientation::HigherIsWorse,
            "m"
        )
        .is_err());
        let recs: Vec<_> = (0..3)
            .map(|i| CanonicalRecord {
                segment_id: format!("s{i}"),
                gold: Gold::Mqm(0.0),
                qe_scores: BTreeMap::from([("m".to_string(), i as f64)]),
            })
            .collect();
        let (d, _) = to_dataset(
            &recs,
            SeverityCutoff::StrictAnyError,
            Orientation::HigherIsWorse,
            "m",
        )
        .unwrap();
        assert_eq!(d.p_count(), 0);
        assert!(d.is_degenerate());
        assert!(to_dataset(
            &recs,
            SeverityCutoff::StrictAnyError,
            Orientation::HigherIsWorse,
            "other"
        )
        .is_err());
    }
}

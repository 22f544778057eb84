//! JSON report envelope and delimited-text helpers.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rocqe_core::diagnostics::{MT_RANKING_NOTE, REPRESENTATIVENESS_NOTE};
use rocqe_core::{Finding, FindingCode, IngestReport};
use serde::Serialize;

use crate::config::{ConfigEcho, MetricData};
use crate::error::{CliError, CliResult};

/// Bumped on any incompatible change to report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: Tool = Tool {
    name: "rocqe",
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Debug, Clone, Serialize)]
pub struct MetricFinding {
    /// `None` for findings that concern the whole run.
    pub metric: Option<String>,
    pub code: FindingCode,
    pub message: String,
}

impl MetricFinding {
    pub fn new(metric: &str, f: Finding) -> Self {
        MetricFinding {
            metric: Some(metric.to_string()),
            code: f.code,
            message: f.message,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Diagnostics {
    pub findings: Vec<MetricFinding>,
    pub notes: [&'static str; 2],
}

impl Diagnostics {
    pub fn new(findings: Vec<MetricFinding>) -> Self {
        Diagnostics {
            findings,
            notes: [REPRESENTATIVENESS_NOTE, MT_RANKING_NOTE],
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub ingest: BTreeMap<String, IngestReport>,
    #[serde(flatten)]
    pub body: T,
    pub diagnostics: Diagnostics,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(
        command: &'static str,
        config: ConfigEcho,
        data: &[MetricData],
        body: T,
        findings: Vec<MetricFinding>,
    ) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            command,
            config,
            ingest: data
                .iter()
                .map(|d| (d.name.clone(), d.ingest.clone()))
                .collect(),
            body,
            diagnostics: Diagnostics::new(findings),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }
}

/// Finite values only; JSON has no infinity.
pub fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Writes to `path`, or to `stdout` when there is none.
pub fn emit(path: Option<&Path>, stdout: &mut dyn Write, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Output(format!("cannot write to standard output: {e}"))),
    }
}

/// Delimited-text writer for CSV and TSV output.
pub struct Delimited {
    sep: char,
    out: String,
}

impl Delimited {
    pub fn new(sep: char) -> Self {
        Delimited {
            sep,
            out: String::new(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                self.out.push(self.sep);
            }
            self.field(f.as_ref());
        }
        self.out.push('\n');
    }

    fn field(&mut self, f: &str) {
        let special = |c: char| c == self.sep || c == '"' || c == '\n' || c == '\r';
        if self.sep == ',' && f.contains(special) {
            self.out.push('"');
            self.out.push_str(&f.replace('"', "\"\""));
            self.out.push('"');
        } else if f.contains(special) {
            // TSV has no quoting; whitespace stands in for separators.
            self.out.push_str(&f.replace(['\t', '\n', '\r'], " "));
        } else {
            self.out.push_str(f);
        }
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

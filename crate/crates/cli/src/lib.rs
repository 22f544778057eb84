//! Command-line front end: reads gold and QE score files, runs the
//! analyses from `rocqe-core` and writes JSON, CSV or TSV reports and SVG
//! plots.
//!
//! Exit codes: 0 success, 1 output failure, 2 input error, 3 a class with
//! no segments, 4 configuration error.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
pub use crate::config::AnalysisConfig;
pub use crate::error::CliError;

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    4
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Roc(a) => commands::cmd_roc(a, stdout, stderr),
        Command::Table(a) => commands::cmd_table(a, stdout, stderr),
        Command::Scenario(a) => commands::cmd_scenario(a, stdout, stderr),
        Command::Hull(a) => commands::cmd_hull(a, stdout, stderr),
        Command::Diagnose(a) => commands::cmd_diagnose(a, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

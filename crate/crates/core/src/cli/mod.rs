//! Command-line front end: config resolution, dispatch and report emission.
//!
//! Exit status is 0 when every requested check passes, 1 on a failed check
//! and 2 on a configuration error. Errors go to stderr as one JSON object.

pub mod config;
pub mod output;
mod run;

pub use config::{Cli, Command, FileConfig, Flags, RunConfig};
pub use run::{run, RunOutcome};

use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde_json::{json, Value};

use crate::error::Error;
use output::{write_atomic, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Module(#[from] Error),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Module(e) if e.is_input_error() => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Config(_) => "Config",
            CliError::Module(e) => e.kind(),
            CliError::Io(_) => "Io",
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "kind": kind, "message": self.to_string() },
        })
    }
}

/// Wrap a run outcome into the versioned report object.
pub fn render_report(cfg: &RunConfig, outcome: &RunOutcome) -> Value {
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "subcommand": cfg.command.name(),
        "passed": outcome.passed,
        "seed": cfg.seed,
        "result": outcome.report,
    });
    if cfg.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report["generated_unix"] = json!(secs);
    }
    report
}

/// Run and write artifacts; returns the process exit status.
pub fn execute(cfg: &RunConfig) -> Result<i32, CliError> {
    let outcome = run(cfg)?;
    let mut text = serde_json::to_string_pretty(&render_report(cfg, &outcome))
        .map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    match &cfg.json_out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let (Some(path), Some(csv)) = (&cfg.csv_out, &outcome.csv) {
        write_atomic(path, csv.as_bytes())?;
    }
    Ok(if outcome.passed { 0 } else { 1 })
}

/// Parse `args`, run, and report errors on stderr. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", CliError::Config(e.to_string().trim().to_string()).to_json());
            return 2;
        }
    };
    match RunConfig::from_cli(&cli).and_then(|cfg| execute(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

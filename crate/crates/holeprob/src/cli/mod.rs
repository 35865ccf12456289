//! The `holeprob` command-line tool.
//!
//! Every subcommand writes one table, as CSV (the default) or as JSON with a
//! `meta` block echoing the version, the full configuration and the
//! tolerances in force. Output is written once, after all rows succeed.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 unsupported shape and
//! parameter combination, 3 method incompatible with the shape, 4 numerical
//! failure (no convergence, no bracket, mass mismatch, index overflow).
//! A table with a row that missed its stopping criterion is still written,
//! with exit code 4. `HOLEPROB_THREADS` sets the size of the worker pool.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::json;

use crate::error::Error;
use args::{Cli, Command, Format};

/// Name of the environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "HOLEPROB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("method/shape mismatch: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Unsupported(_)) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Lib(
                Error::NonConvergence { .. }
                | Error::BracketFailure { .. }
                | Error::NonBracketing { .. }
                | Error::MassMismatch { .. }
                | Error::IndexOverflow(_),
            ) => 4,
            _ => 1,
        }
    }
}

/// Renders the output document for parsed arguments, with a note when a row
/// missed its stopping criterion.
pub fn render(cli: &Cli) -> Result<(String, Option<String>), CliError> {
    let (name, report) = match &cli.command {
        Command::Energy(a) => ("energy", commands::energy(a)?),
        Command::Hole(a) => ("hole", commands::hole(a)?),
        Command::Fekete(a) => ("fekete", commands::fekete(a)?),
        Command::Variance(a) => ("variance", commands::variance(a)?),
        Command::Sample(a) => ("sample", commands::sample(a)?),
    };
    let doc = match cli.common.format {
        Format::Csv => report.table.to_csv(),
        Format::Json => {
            let meta = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "command": name,
                "config": serde_json::to_value(&cli.command).expect("flags serialise"),
                "format": cli.common.format,
                "tolerances": report.tolerances,
            });
            report.table.to_json(meta)
        }
    };
    Ok((doc, report.incomplete))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    // A pool already built by an earlier call in this process is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args`, runs the subcommand and writes the result to `--output`
/// or `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| render(&cli)).and_then(|(doc, note)| {
        match &cli.common.output {
            Some(path) => std::fs::write(path, doc)?,
            None => stdout.write_all(doc.as_bytes())?,
        }
        Ok(note)
    });
    match result {
        Ok(None) => 0,
        Ok(Some(note)) => {
            let _ = writeln!(stderr, "holeprob: {note}");
            4
        }
        Err(e) => {
            let _ = writeln!(stderr, "holeprob: {e}");
            e.exit_code()
        }
    }
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

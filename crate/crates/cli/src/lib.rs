//! Command-line front end: plot-ready CSV/JSON tables and verification reports.
//!
//! Exit status is 0 on success, 1 when a reported check fails and 2 on
//! invalid input or a forbidden orbit region.

pub mod args;
mod commands;
mod error;
pub mod table;

use std::io::Write;

pub use args::Cli;
pub use commands::{DEFAULT_TOLERANCE, TOLERANCE_ENV};
pub use error::{CliError, CliResult};

/// Runs one command, writing its artifact to `--output` or stdout.
pub fn run(cli: &Cli) -> CliResult<()> {
    let outcome = commands::execute(&cli.command)?;
    match &commands::output_args(&cli.command).output {
        Some(path) => std::fs::write(path, &outcome.body)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes())?;
            out.flush()?;
        }
    }
    outcome.failure.map_or(Ok(()), Err)
}

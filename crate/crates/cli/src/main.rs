//! `nustable`: probability tables, partial-sum curves, samplers and
//! verification experiments for random-summation stable laws.
//!
//! Exit codes: 0 success or passing verification, 1 tolerance failure or
//! I/O error, 2 usage error.

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

/// Failure classes mapped to exit codes.
pub enum Failure {
    /// Bad arguments or parameters outside the admissible sets.
    Usage(anyhow::Error),
    /// Output could not be written.
    Io(anyhow::Error),
}

impl From<nustable::Error> for Failure {
    fn from(e: nustable::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

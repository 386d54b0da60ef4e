//! Command-line front end: configuration, dispatch and CSV output.

mod commands;
mod config;
mod grid;
mod output;

pub use commands::run;
pub use config::{parse_config, schema, Command, KeySpec, Kind, RunConfig, Value, JOBS_ENV};
pub use grid::{parse_grid, Scale};
pub use output::{emit_csv, format_float, Cell, Table};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version` output; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Compute(#[from] minmax_core::Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Help(_) => 0,
            CliError::Config(_) | CliError::Compute(_) => 2,
            CliError::Io(_) => 4,
        }
    }
}

/// Outcome of a run that produced output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Some sweep points did not converge; their rows carry `converged = false`.
    PartialFailure,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::PartialFailure => 3,
        }
    }
}

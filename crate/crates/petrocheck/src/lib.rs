//! Command line front end for `petrocheck-core`: experiment configs, JSON
//! reports, CSV tables and parameter sweeps.

pub mod cli;
pub mod commands;
pub mod config;
pub mod json;
pub mod tables;

use std::path::PathBuf;

pub use commands::{execute, Outcome};
pub use config::ExperimentConfig;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const CERTIFICATE: i32 = 2;
    pub const SOLVER: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] petrocheck_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io { path: PathBuf::from("<stream>"), source }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(petrocheck_core::Error::Solver { .. }) => exit::SOLVER,
            _ => exit::USAGE,
        }
    }
}

//! Batch front end: config parsing, single runs, parameter sweeps, the
//! operator-algebra check, and cross-model comparisons.
//!
//! Configs are TOML documents; a `[sweep]` table turns a run config into a
//! sweep. Results are written as CSV trajectories plus JSON summaries that
//! echo the fully resolved config. Output is deterministic: fixed-step
//! integration and fixed number formatting make repeated runs byte-identical.

mod commands;
mod config;

pub use commands::{
    algebra_check_rows, cmd_algebra_check, cmd_compare, cmd_run, cmd_sweep, summary_frequency,
    CheckRow, CompareArtifacts, CompareSummary, RunArtifacts, RunSummary, SweepArtifacts,
};
pub use config::{parse_config, set_axis_value, ParsedConfig, RunConfig, SweepConfig};

use crate::Error;

/// Process exit codes: 0 success, 1 config error, 2 I/O, 3 numerical abort,
/// 4 unsupported comparison.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("unsupported comparison: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::NumericalAbort { .. }
            | Error::NonHermitian { .. }
            | Error::EigenResidual { .. }
            | Error::ImaginaryResidue { .. } => CliError::Numerical(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

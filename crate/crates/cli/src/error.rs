use std::path::PathBuf;

use lifetime_info::Error;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DATA: i32 = 3;
    pub const GOLDEN: i32 = 4;
    pub const STATISTICAL: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Input { path: PathBuf, source: Error },

    #[error(transparent)]
    Core(#[from] Error),

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// Whether a library error is a bad request (flags) rather than bad data.
pub fn is_usage(e: &Error) -> bool {
    matches!(
        e.root(),
        Error::IndexOutOfRange { .. }
            | Error::ResidualAtTerminal(_)
            | Error::MissingIndex(_)
            | Error::MissingQ(_)
            | Error::UnsupportedMeasure(_)
            | Error::TooFewDraws(_)
            | Error::InvalidStudy(_)
            | Error::ZeroVariance
            | Error::InvalidR(_)
    )
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Read { .. } | CliError::Input { .. } => exit::DATA,
            CliError::Core(e) if is_usage(e) => exit::USAGE,
            CliError::Core(_) => exit::DATA,
            CliError::Write { .. } | CliError::Output(_) => exit::IO,
        }
    }
}

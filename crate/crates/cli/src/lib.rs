//! Library side of the `ionspin` command-line tool: configuration parsing,
//! subcommand dispatch and CSV rendering.

pub mod commands;
pub mod config;
mod csv;

pub use commands::{run, Subcommand};
pub use config::{parse_config, RunConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{key} = {value} is out of range: {bound}")]
    Range {
        key: &'static str,
        value: f64,
        bound: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] ionspin_core::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "E_CONFIG",
            CliError::Range { .. } => "E_RANGE",
            CliError::Io { .. } => "E_IO",
            CliError::Core(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Range { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                ionspin_core::Error::Domain(_) => 4,
                ionspin_core::Error::Protocol(_) => 5,
                ionspin_core::Error::Convergence { .. } => 6,
                ionspin_core::Error::Resolution(_) | ionspin_core::Error::Trace(_) => 7,
                ionspin_core::Error::MixedMultiplet { .. } => 8,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

//! Command-line front end: configuration, dispatch and file formats.

pub mod commands;
pub mod config;
pub mod csv_io;
pub mod svg;

use thiserror::Error;

pub use commands::{run, Command, Options, Status};
pub use config::{parse_config, ConfigError, RunConfig, TimeScaleConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Csv(String),
}

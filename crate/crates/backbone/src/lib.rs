//! File formats, experiment sweeps and the command-line front end built on
//! [`backbone_core`].

use std::path::{Path, PathBuf};

pub mod config;
pub mod experiments;
pub mod formats;

pub use backbone_core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] backbone_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Config(String),
}

impl Error {
    /// Stable kebab-case identifier printed on stderr by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Core(e) => e.name(),
            Error::Io { .. } => "io-error",
            Error::Csv(_) => "csv-error",
            Error::Config(_) => "invalid-config",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

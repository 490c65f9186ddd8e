use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid HSV bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("no fix: no marker observations")]
    NoFix,

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("invalid config field `{field}`: {constraint}")]
    ConfigInvalid { field: String, constraint: String },

    #[error("malformed PNM data: {0}")]
    Pnm(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid_field(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            field: field.into(),
            constraint: constraint.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad configuration input.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::ConfigParse(_) | Error::ConfigInvalid { .. })
    }
}

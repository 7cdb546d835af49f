use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no convergence after {iterations} iterations: {what}")]
    NonConvergent { what: &'static str, iterations: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{context}: {source}")]
    Io {
        context: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Csv {
        context: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl From<csv::Error> for Error {
    fn from(source: csv::Error) -> Self {
        Error::csv("csv", source)
    }
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            context: path.into(),
            source,
        }
    }

    pub fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            context: path.into(),
            source,
        }
    }

    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index",
            Error::Domain(_) => "domain",
            Error::InsufficientData { .. } => "insufficient-data",
            Error::NonConvergent { .. } => "non-convergent",
            Error::Contract(_) => "contract",
            Error::Config { .. } => "config",
            Error::Io { .. } => "io",
            Error::Csv { .. } => "csv",
            Error::Parse { .. } => "parse",
            Error::Context { source, .. } => source.kind(),
        }
    }

    /// Config key behind the error, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            Error::Config { key, .. } => Some(key),
            Error::Context { source, .. } => source.key(),
            _ => None,
        }
    }

    /// Prefix the message with extra context (e.g. a sweep grid point).
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Config { key, message } => Error::Config {
                key,
                message: format!("{ctx}: {message}"),
            },
            other => Error::Context {
                context: ctx.to_string(),
                source: Box::new(other),
            },
        }
    }
}

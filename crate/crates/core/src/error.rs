use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants map one-to-one onto the CLI exit codes: configuration and
/// validation problems, numerical failures, and I/O failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("numerical failure in {function}: {detail}")]
    Numerical {
        function: &'static str,
        detail: String,
    },

    #[error("evaluation budget exceeded: {estimated} evaluations requested, cap is {cap}; {hint}")]
    Budget {
        estimated: u64,
        cap: u64,
        hint: String,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn numerical(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            function,
            detail: detail.into(),
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain { .. } | Error::Budget { .. } => 2,
            Error::Numerical { .. } | Error::Invariant(_) => 3,
            Error::Io { .. } | Error::Serialize(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a model function (e.g. zero link distance).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error(
        "path-loss budget {l_th_db} dB too small: coverage radius {radius_m:.3} m is below 1 m"
    )]
    BudgetTooSmall { l_th_db: f64, radius_m: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("target CoV {target} unreachable (achievable range {min:.3}..{max:.3})")]
    UnreachableTarget { target: f64, min: f64, max: f64 },

    #[error("unknown environment `{0}`")]
    UnknownEnvironment(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code: 1 usage, 2 data, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownEnvironment(_) | Error::InvalidParameter(_) | Error::Config(_) => 1,
            Error::EmptyInput(_)
            | Error::Degenerate(_)
            | Error::Parse { .. }
            | Error::Io { .. } => 2,
            Error::Domain(_)
            | Error::NoRoot(_)
            | Error::BudgetTooSmall { .. }
            | Error::UnreachableTarget { .. } => 3,
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid membership matrix: {0}")]
    InvalidMembership(String),

    #[error("invalid connectivity stack: {0}")]
    InvalidConnectivity(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("rank deficiency: residual norm {residual:.3e} after {picked} of {k} vertex picks")]
    RankDeficiency { picked: usize, k: usize, residual: f64 },

    #[error("ill-conditioned corner matrix (condition number {0:.3e})")]
    IllConditionedCorner(f64),

    #[error("permutation search supports K <= {max}, got K = {k}")]
    UnsupportedK { k: usize, max: usize },

    #[error("network has no edges")]
    EmptyNetwork,

    #[error("model selection failed: {0}")]
    ModelSelection(String),

    #[error("unusable data: {0}")]
    UnusableData(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

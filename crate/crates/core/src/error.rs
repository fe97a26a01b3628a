use std::path::PathBuf;

use thiserror::Error;

/// A parameter violates one of the domain invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("`{name}` must lie in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("clustered layout requires n = c * ell, got n = {n}, c = {c}, ell = {ell}")]
    Dimension { n: usize, c: usize, ell: usize },
    #[error("message has {found} positions, expected {expected}")]
    MessageLength { expected: usize, found: usize },
    #[error("message position {position} holds unit {unit}, outside [0, {ell})")]
    UnitOutOfRange {
        position: usize,
        unit: usize,
        ell: usize,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(
        "Poisson truncation for lambda = {lambda} needs {needed} terms, above the cap of {cap}"
    )]
    TruncationCap {
        lambda: f64,
        needed: usize,
        cap: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

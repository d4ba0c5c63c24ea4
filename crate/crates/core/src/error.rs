use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Numerical conditions (singular shifts, rank loss, non-convergence) are kept
/// apart from I/O and parse failures so callers can map them to different
/// exit paths.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric: entry ({i},{j}) differs from ({j},{i})")]
    NotSymmetric { i: usize, j: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("matrix is indefinite: x^T A x = {value:e}")]
    Indefinite { value: f64 },

    #[error("rank deficiency: column {column} is linearly dependent on its predecessors")]
    RankDeficient { column: usize },

    #[error("near-singular shift tau = {tau:e}: (A - tau I) has a vanishing pivot")]
    NearSingularShift { tau: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("Richardson update annihilated a column (tau = {tau:e}, theta = {theta})")]
    Annihilation { tau: f64, theta: f64 },

    #[error("shift tau = {tau:e} annihilates a desired component; rate is unbounded")]
    DegenerateShift { tau: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("component ratio is already zero at iteration {k}; nothing left to contract")]
    AlreadyConverged { k: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn with_context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for failures caused by the file system rather than the numerics.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } | Error::Parse { .. } => true,
            Error::Context { source, .. } => source.is_io(),
            _ => false,
        }
    }

    /// True for argument and configuration errors the user can fix by
    /// changing the invocation.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::InvalidConfig(_) | Error::InvalidSpectrum(_) | Error::Empty(_) => true,
            Error::Context { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

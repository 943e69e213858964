use thiserror::Error;

/// Errors produced anywhere in the simulator and analytics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left:?}, right is {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { pivot: f64, index: usize },

    #[error("quadrature did not converge: estimate {estimate}, achieved relative tolerance {achieved_tol:e}")]
    NoConvergence { estimate: f64, achieved_tol: f64 },

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("degenerate channel draw: {0}")]
    DegenerateDraw(&'static str),

    #[error("rank-deficient beam draw after {attempts} attempts")]
    RankDeficientBeams { attempts: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("all {trials} trials were degenerate")]
    AllTrialsDegenerate { trials: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

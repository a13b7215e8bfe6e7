use thiserror::Error;

/// Errors produced by the numerical routines and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integration failed at t = {t_last}: {reason}")]
    Integration { t_last: f64, reason: String },

    #[error("invalid Bogoliubov transformation: {0}")]
    InvalidBogoliubov(String),

    #[error("invalid quasi-free state: {0}")]
    InvalidState(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not a strict contraction (norm {norm})")]
    NotContraction { norm: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("state is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("Fock truncation too small: tail weight {tail:e} in dimension {dim}")]
    DimensionTooSmall { dim: usize, tail: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("degenerate spectrum: E_max - E_min = {0:e}, rescaling undefined")]
    DegenerateSpectrum(f64),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty input: {0}")]
    Empty(&'static str),
}

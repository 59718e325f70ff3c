use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quasimode rejected: (qm) value {value} exceeds 1")]
    QuasimodeRejected { value: f64 },

    #[error("empty spectral window [{lo}, {hi}]; nearest nonempty window starts at {nearest}")]
    EmptyWindow { lo: f64, hi: f64, nearest: f64 },

    #[error("grid too coarse: sign changes in {fraction:.3} of cells")]
    GridTooCoarse { fraction: f64 },

    #[error("duplicate-detection conflict: words {first} and {second} coincide within tolerance but have different displacements")]
    DedupConflict { first: String, second: String },

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

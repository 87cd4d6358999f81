use thiserror::Error;

/// Errors raised by the model, basis, solver and table layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The screened potential is no longer binding (non-positive effective charge).
    #[error("model domain error: {0}")]
    ModelDomain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("overlap matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("near-degenerate eigenvalues {0} and {1}")]
    Degenerate(f64, f64),

    #[error("unknown atom: {0}")]
    UnknownAtom(String),

    #[error("reference data: {0}")]
    Reference(String),

    #[error("label mismatch: computed `{computed}` vs golden `{golden}`")]
    LabelMismatch { computed: String, golden: String },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

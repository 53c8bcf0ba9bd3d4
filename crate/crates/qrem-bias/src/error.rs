//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, parsing, and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),

    #[error("invalid error rate {0}: rates must lie in [0, 0.5)")]
    InvalidRate(f64),

    #[error("{what} limited to {limit} qubits, requested {requested}")]
    SizeGuard {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("expected {expected} parameters, got {actual}")]
    ParameterCount { expected: usize, actual: usize },

    #[error("invalid excitation: {0}")]
    InvalidExcitation(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

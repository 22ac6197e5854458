use thiserror::Error;

use crate::scalar::TropScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} of {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix must have at least one row and one column")]
    Empty,

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("{op} requires an irreducible matrix")]
    Reducible { op: &'static str },

    #[error("{op} requires a matrix with at least one cycle")]
    Acyclic { op: &'static str },

    #[error("series diverges: maximum cycle mean {mu} > 0")]
    Divergent { mu: TropScalar },

    #[error("log is defined for finite y > 0, got {0}")]
    LogDomain(TropScalar),

    #[error("vector must have at least one finite entry")]
    AllEpsilonVector,

    #[error("vector has length {actual}, matrix has {expected} columns")]
    VectorLength { expected: usize, actual: usize },

    #[error("no repeat among the first {cap} normalized powers (lambda = {lambda})")]
    CapExceeded { cap: u64, lambda: TropScalar },

    #[error("oracle refuses {what} = {actual} (bound {bound})")]
    OracleBound {
        what: &'static str,
        actual: usize,
        bound: usize,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Text input errors. `line` is 1-based over the raw input, `row` is the
/// 1-based data row and `token` the 1-based token within it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid scalar token {text:?}")]
    Scalar { text: String },

    #[error("line {line} (row {row}, token {token}): invalid scalar {text:?}")]
    Token {
        line: usize,
        row: usize,
        token: usize,
        text: String,
    },

    #[error("line {line} (row {row}): expected {expected} tokens, found {found}")]
    Ragged {
        line: usize,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("no data")]
    NoData,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

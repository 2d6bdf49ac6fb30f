use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is too large for exhaustive signed-permutation search (max 8)")]
    DimensionTooLarge(usize),

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("{what} has size {size}, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: BigInt,
        cap: u64,
    },

    #[error("generators span a subgroup of order {spanned}, group order is {order}")]
    NotGenerating { spanned: BigInt, order: BigInt },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn too_large(what: &'static str, size: impl Into<BigInt>, cap: u64) -> Self {
        Error::TooLarge {
            what,
            size: size.into(),
            cap,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

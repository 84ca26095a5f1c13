use thiserror::Error;

use crate::exact::VarId;

/// Errors reported by the library. Everything is a domain error; panics are
/// reserved for violated internal invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("no value assigned to variable {0}")]
    MissingVariable(VarId),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("index {i} out of range 1..={n}")]
    IndexOutOfRange { i: usize, n: usize },

    #[error("the empty word is not allowed here")]
    EmptyWord,

    #[error("letter index {letter} exceeds alphabet size {m}")]
    LetterOutOfRange { letter: usize, m: usize },

    #[error("divided-power degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("part weight {weight} exceeds divided-power degree {n}")]
    WeightExceedsDegree { weight: usize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial is not symmetric")]
    NotSymmetric,

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

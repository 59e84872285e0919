use thiserror::Error;

/// Errors raised by the tropical, cumulative and Fréchet layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch, left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("inverse of an infinite value ({0}) does not exist")]
    InverseOfInfinite(&'static str),

    #[error("invalid value {0}: NaN and infinite floats are not allowed")]
    InvalidValue(String),

    #[error("negative mass {value} at index {index}")]
    NegativeMass { index: usize, value: String },

    #[error("negative cell {value} at ({row}, {col})")]
    NegativeCell { row: usize, col: usize, value: String },

    #[error("total mass is zero")]
    ZeroMass,

    #[error("infeasible marginals: sum(p) = {p_sum} but sum(q) = {q_sum}")]
    Infeasible { p_sum: String, q_sum: String },

    #[error("table is not a member of the Fréchet class")]
    NotAMember,

    #[error("cannot parse number {input:?}: {reason}")]
    ParseNumber { input: String, reason: &'static str },

    #[error("value {0} is not finite")]
    NotFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

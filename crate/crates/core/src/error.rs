use thiserror::Error;

use crate::numerics::NumericalResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent sum {0}: a non-alternating outer exponent must be at least 2")]
    Divergent(String),

    #[error("precision unreachable: {reason}")]
    PrecisionUnreachable {
        reason: String,
        best_effort: Box<NumericalResult>,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("inconsistent relation system (transcription error?): {relations:?}")]
    Inconsistent { relations: Vec<String> },

    #[error("reduction table entry `{entry}` rejected: {reason}")]
    TableEntry { entry: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

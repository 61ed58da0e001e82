use thiserror::Error;

use crate::report::Witness;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructions. Law failures found by the validators are
/// not errors; they are reported through [`crate::AxiomReport`].
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong table dimensions, indices out of range,
    /// mismatched parents or slots.
    #[error("structural error: {0}")]
    Structural(String),

    /// An input that is well-formed but fails a required law.
    #[error("law violated: {0}")]
    LawViolation(Witness),

    /// A construction that is mathematically impossible on the given
    /// inputs (for example an induced action that is not well defined).
    #[error("obstruction: {message}")]
    Obstruction { message: String, witness: Option<Witness> },

    /// A configured enumeration or size limit would be exceeded.
    #[error("limit exceeded: {what} requires {required}, limit is {limit}")]
    Limit { what: String, required: u128, limit: u128 },

    /// A bounded construction did not stabilize within its bound.
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn limit(what: impl Into<String>, required: u128, limit: u128) -> Self {
        Error::Limit {
            what: what.into(),
            required,
            limit,
        }
    }
}

use thiserror::Error;

/// Errors produced by the engine.
///
/// Every decision in the library is exact; an `Error` always means the input
/// was outside an operation's domain (or a parse failed), never that a
/// computation was approximated.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed class text. The message names the offending token.
    #[error("parse error: {0}")]
    Parse(String),

    /// Two classes living on blow-ups at different numbers of points.
    #[error("dimension mismatch: classes have n = {left} and n = {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Input outside the operation's stated domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The Monte Carlo interpolation oracle could not run to completion.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    /// A generated record violated one of its own defining bounds.
    /// Indicates a parameter outside the valid range.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AtlasError {
    /// A product would carry two `g`-type factors in one monomial. All series
    /// of combinatorial origin are linear in the `g`-type indeterminates.
    #[error("linearity violation: product term with two g-type factors ({0} * {1})")]
    LinearityViolation(String, String),

    /// A coefficient was requested beyond the exact window of a series.
    #[error("truncation exceeded: requested degree ({0}, {1}, {2}) outside window ({3}, {4}, {5})")]
    TruncationExceeded(u32, u32, u32, u32, u32, u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Guard against factorial blowup in the brute-force enumerator.
    #[error("resource guard: {0} (pass the unsafe override to proceed)")]
    ResourceGuard(String),

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl AtlasError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        AtlasError::InvalidArgument(msg.into())
    }
}

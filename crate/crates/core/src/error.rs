use thiserror::Error;

use crate::graded::Slot;

/// Errors produced by the library.
///
/// Errors for which [`Error::is_structural`] holds come from malformed input
/// (CLI exit code 2); the others mean a mathematical check failed (exit 1).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("group is infinite or exceeds the order bound {bound}")]
    GroupTooLarge { bound: usize },

    #[error("differential does not preserve the subcomplex at slot {slot}")]
    ComplexNotClosed { slot: Slot },

    #[error("internal consistency failure at slot {slot}: {detail}")]
    InternalConsistency { slot: Slot, detail: String },
}

impl Error {
    /// True for errors caused by malformed input rather than a failed check.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Structural(_)
                | Error::Contract(_)
                | Error::ChartMismatch(_)
                | Error::GroupTooLarge { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

use thiserror::Error;

/// Errors raised by the physics layer.
///
/// `context` names the operation that rejected its input so that front ends
/// can report where a failure originated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{context}: invalid input: {reason}")]
    Validation {
        context: &'static str,
        reason: String,
    },
    #[error("{context}: argument out of domain: {reason}")]
    Domain {
        context: &'static str,
        reason: String,
    },
    #[error("{context}: dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },
    #[error("clock never reads T = {reading}: reading probability {weight:e} is below 1e-12")]
    ClockNeverReads { reading: f64, weight: f64 },
}

impl Error {
    pub(crate) fn validation(context: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            context,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(context: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            context,
            reason: reason.into(),
        }
    }

    pub(crate) fn dims(
        context: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// Name of the operation that produced the error, if it carries one.
    pub fn context(&self) -> &'static str {
        match self {
            Error::Validation { context, .. }
            | Error::Domain { context, .. }
            | Error::DimensionMismatch { context, .. } => context,
            Error::ClockNeverReads { .. } => "conditional_probability",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

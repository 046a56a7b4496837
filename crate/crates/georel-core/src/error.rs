//! Crate-wide error type.

/// Errors reported by distribution, estimator and study constructors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A distribution or study parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An estimator was asked for outside its domain (e.g. censored MLE with
    /// zero observed failures, or a system-reliability UE with `m ≥ n`).
    #[error("estimator domain violation: {0}")]
    EstimatorDomain(String),

    /// An exact enumeration would exceed the configured size guard.
    #[error("enumeration too large: {detail} (limit {limit})")]
    EnumerationTooLarge { detail: String, limit: u64 },

    /// An input collection that must be nonempty was empty.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

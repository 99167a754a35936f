use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// Inputs are well-formed but outside the physical regime the estimate is valid for.
    #[error("validity error ({regime}): {reason}")]
    Validity {
        regime: &'static str,
        reason: String,
    },

    #[error("unknown species `{name}` (available: {})", available.join(", "))]
    UnknownSpecies {
        name: String,
        available: Vec<String>,
    },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The event-driven simulation reached an inconsistent state.
    #[error("simulation integrity error: {0}")]
    Integrity(String),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn validity(regime: &'static str, reason: impl Into<String>) -> Self {
        Error::Validity {
            regime,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Validity { .. } => "validity",
            Error::UnknownSpecies { .. } => "unknown_species",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Integrity(_) => "integrity",
        }
    }

    /// True for failures of the simulation itself rather than of its inputs.
    pub fn is_runtime(&self) -> bool {
        matches!(self, Error::Integrity(_))
    }
}

/// Rejects values that are not strictly positive and finite.
pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(
            field,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum HedgeError {
    /// A loss entry fell outside the declared `[0, H]` range.
    #[error("loss {value} at round {round} (expert {expert}) is outside [0, {h_bound}]")]
    LossOutOfBounds {
        round: usize,
        expert: usize,
        value: f64,
        h_bound: f64,
    },

    /// A scalar parameter failed validation.
    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// The game protocol was violated (duplicate reveal, reveal from the future, ...).
    #[error("protocol violation: {0}")]
    Protocol(String),

    /// An enumeration oracle was asked for more sequences than the guard allows.
    #[error("enumeration size {size} exceeds the capacity guard {guard}")]
    Capacity { size: u128, guard: u128 },

    /// A data file could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HedgeError>;

impl HedgeError {
    pub fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        HedgeError::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

use thiserror::Error;

/// Errors raised by schedule construction, kernel builders and the engines.
#[derive(Debug, Error)]
pub enum Error {
    /// An index or size argument fell outside its valid range.
    #[error("{what} out of range: got {got}, expected {expected}")]
    Range {
        what: &'static str,
        got: String,
        expected: String,
    },

    /// A configuration value violates a model precondition.
    #[error("invalid configuration for `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// The chain or graph lacks the structure an operation requires
    /// (reducible kernel, singular hitting-time system, zero stationary mass).
    #[error("structural error: {0}")]
    Structural(String),

    /// An iterative numerical routine failed to converge.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    Numerical {
        what: &'static str,
        iterations: u64,
        residual: f64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub fn range(what: &'static str, got: impl ToString, expected: impl ToString) -> Self {
        Error::Range {
            what,
            got: got.to_string(),
            expected: expected.to_string(),
        }
    }

    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

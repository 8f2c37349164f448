use thiserror::Error;

/// Errors raised by the operator toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: expected {expected}, found {found}")]
    Dimension { expected: String, found: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("singular resolvent (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(expected: impl Into<String>, found: usize) -> Self {
        Error::Dimension {
            expected: expected.into(),
            found,
        }
    }
}

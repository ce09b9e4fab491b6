use thiserror::Error;

/// Errors surfaced by the library and the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("ground set mismatch: {left} vs {right}")]
    GroundMismatch { left: String, right: String },

    #[error("unsupported presentation: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

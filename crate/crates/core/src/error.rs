use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnshError {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("oracle contract violated: point {point} colored {first} then {second}")]
    NondeterministicOracle {
        point: String,
        first: u8,
        second: u8,
    },

    #[error("color {color} out of range for k = {k}")]
    ColorOutOfRange { color: u8, k: u8 },

    #[error("instance too large for {engine}: {detail}")]
    TooLarge {
        engine: &'static str,
        detail: String,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("catalog consistency: {0}")]
    Consistency(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for EnshError {
    fn from(e: std::io::Error) -> Self {
        EnshError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, EnshError>;

use thiserror::Error;

/// Errors raised by the laboratory.
///
/// Every variant maps onto one of the CLI exit classes via [`VniError::exit_class`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum VniError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {dim} exceeds the cap of {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("tolerance violated: {0}")]
    ToleranceViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Usage,
    Data,
    Invariant,
}

impl VniError {
    pub fn exit_class(&self) -> ExitClass {
        match self {
            VniError::InvalidInput(_) => ExitClass::Usage,
            VniError::ToleranceViolated(_) => ExitClass::Invariant,
            _ => ExitClass::Data,
        }
    }
}

impl From<std::io::Error> for VniError {
    fn from(e: std::io::Error) -> Self {
        VniError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for VniError {
    fn from(e: serde_json::Error) -> Self {
        VniError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, VniError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(VniError::InvalidInput(msg.into()))
}

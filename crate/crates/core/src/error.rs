use thiserror::Error;

/// Errors raised by the library. The variants map onto the CLI exit codes:
/// `Usage` → 2, `Validation`/`Precondition` → 3, `Resource` → 4.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("not multiplicity-free: {0}")]
    NotMultiplicityFree(String),
    #[error("truncation window error: {0}")]
    Window(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Resource(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;

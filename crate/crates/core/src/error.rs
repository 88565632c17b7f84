use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate element identifier {0}")]
    DuplicateElement(String),
    #[error("unknown element identifier {0}")]
    UnknownElement(String),
    #[error("order relation has a cycle through {0}")]
    Cycle(String),
    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("not a linear extension: {0}")]
    NotAnExtension(String),
    #[error("pair ({0}, {1}) is not incomparable")]
    NotIncomparable(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("retry limit of {limit} exhausted: {what}")]
    RetryExhausted { what: &'static str, limit: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
        if size > cap {
            Err(Error::CapExceeded { what, size, cap })
        } else {
            Ok(())
        }
    }
}

use thiserror::Error;

/// Failures reported by the library.
///
/// `Input` covers malformed arguments (wrong shape, non-finite values,
/// invalid states). `Domain` covers well-formed arguments outside the region
/// where a result exists, such as asking for an optimal time below the
/// entanglement threshold.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

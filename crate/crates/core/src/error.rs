use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants are coarse on purpose: callers (the CLI in particular) map
/// them onto distinct exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// The input lies outside the range where an exact answer is guaranteed.
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    /// A configured work budget was exhausted before an answer was found.
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// A hypothesis required by a construction or theorem check failed.
    #[error("hypothesis rejected [{check}]: {detail}")]
    Hypothesis { check: String, detail: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn hypothesis(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

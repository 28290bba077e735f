use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative evaluation did not reach its tolerance within budget.
    #[error("no convergence in {what}: best estimate {estimate:e}")]
    Convergence { what: String, estimate: f64 },

    /// A numerical evaluation produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn convergence(what: impl Into<String>, estimate: f64) -> Self {
        Error::Convergence {
            what: what.into(),
            estimate,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Precondition(_) => 1,
            Error::Convergence { .. } | Error::Numerical(_) => 2,
        }
    }

    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E_DOMAIN",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::Convergence { .. } => "E_CONVERGENCE",
            Error::Numerical(_) => "E_NUMERICAL",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

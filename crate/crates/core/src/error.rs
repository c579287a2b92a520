use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs contradict each other (e.g. C2 > C1).
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    /// The request is well-formed but outside what is supported exactly.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A mathematical precondition of the operation does not hold.
    #[error("precondition `{gate}` failed: {detail}")]
    Precondition { gate: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

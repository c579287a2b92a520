use thiserror::Error;

/// Failure classes, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input.
    #[error("input error: {0}")]
    Input(String),
    /// A mathematical precondition of the task does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<openness::Error> for CliError {
    fn from(e: openness::Error) -> Self {
        use openness::Error as E;
        match e {
            E::Precondition { .. } | E::Unsupported(_) => CliError::Precondition(e.to_string()),
            E::Domain(_) | E::InconsistentInput(_) | E::Parse(_) => CliError::Input(e.to_string()),
        }
    }
}

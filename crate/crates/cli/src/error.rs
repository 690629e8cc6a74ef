use thiserror::Error;

/// Failures surfaced by the command-line front end, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

impl From<gptlab_core::Error> for CliError {
    fn from(e: gptlab_core::Error) -> Self {
        use gptlab_core::Error as E;
        match e {
            E::Unsupported(_) => CliError::Unsupported(e.to_string()),
            E::InvalidSpace(_) | E::Empty => CliError::Parse(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

use qpa_core::Error;

/// A failure that ends the process with a specific exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 parse, 3 invalid state, 4 mismatch, 5 I/O (1 is reserved for failed checks).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::AlphabetMismatch { .. } => CliError::Mismatch(msg),
            Error::InvalidFamily(_) | Error::UnknownPreset(_) | Error::Domain(_) | Error::InvalidFunction(_) => {
                CliError::Parse(msg)
            }
            Error::NoConvergence { .. } | Error::SizeCap { .. } => CliError::InvalidState(msg),
            _ => CliError::InvalidState(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

use thiserror::Error;

/// Failure classes mapped to process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<sdf_core::Error> for CliError {
    fn from(e: sdf_core::Error) -> Self {
        use sdf_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Config { .. } => CliError::Usage(msg),
            E::Schema(_) | E::Row { .. } | E::Data(_) | E::Io(_) => CliError::Data(msg),
            E::Domain(_) | E::Contract(_) => CliError::Runtime(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

use std::io;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(relaycap_core::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl From<relaycap_core::Error> for CliError {
    fn from(e: relaycap_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 1 verification failure, 2 config or input error, 3 guard, 4 infeasible.
    pub fn exit_code(&self) -> u8 {
        use relaycap_core::Error as E;
        match self {
            CliError::Verification(_) | CliError::Core(E::BoundViolation { .. }) => 1,
            CliError::Core(E::GuardExceeded { .. }) => 3,
            CliError::Core(E::Infeasible { .. }) => 4,
            CliError::Config(_) | CliError::Core(_) | CliError::Io(_) | CliError::Csv(_) => 2,
        }
    }

    pub fn to_exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}

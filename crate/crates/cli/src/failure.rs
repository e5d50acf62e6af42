use std::fmt;
use std::process::ExitCode;

use nexp_core::Error;

#[derive(Debug)]
pub enum Failure {
    /// Missing or inconsistent flags that clap cannot catch on its own.
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => core_code(e),
            Failure::Io(_) => 6,
        })
    }
}

pub fn core_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::NonConvergence { .. } | Error::BudgetExceeded { .. } => 4,
        Error::PrecisionInsufficient { .. } => 5,
        Error::IdentityViolation(_) => 1,
        _ => 3,
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => e.fmt(f),
            Failure::Io(e) => e.fmt(f),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

use std::fmt;

use knotdraw::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOPOLOGY: i32 = 3;
pub const EXIT_OVERUNDER: i32 = 4;

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    /// Prefixes the message with the file it concerns.
    pub fn context(self, what: impl fmt::Display) -> Self {
        CliError {
            message: format!("{what}: {}", self.message),
            ..self
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TopologyChanged(_) => EXIT_TOPOLOGY,
            Error::OverUnderMismatch(_) => EXIT_OVERUNDER,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

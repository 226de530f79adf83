//! Library side of the `lattice-forge` command: the file format, the
//! commands and the self-check suite. `main.rs` only parses arguments.

pub mod commands;
pub mod dot;
pub mod selfcheck;
pub mod workspace;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable input: bad JSON, a missing file, a malformed term.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid: {0}")]
    Validation(String),
    /// A checker found a counterexample.
    #[error("property violated: {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Violation(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

impl From<lattice_forge::Error> for CliError {
    fn from(e: lattice_forge::Error) -> Self {
        match e {
            lattice_forge::Error::TermParse { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("i/o: {e}"))
    }
}

use std::fmt;

use qrank_core::Error;

/// Failure of a CLI invocation, grouped by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable input, malformed JSON, wrong structure, or an input kind
    /// the command does not accept.
    Parse(String),
    /// Well-formed input with an invalid value.
    Invalid(String),
    /// A search would exceed one of the configured limits.
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Invalid(m) | CliError::Budget(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            CliError::Parse(_) => "parse error",
            CliError::Invalid(_) => "invalid input",
            CliError::Budget(_) => "budget exceeded",
        };
        write!(f, "{kind}: {}", self.message())
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else if matches!(e, Error::PreconditionViolated(_)) {
            CliError::Parse(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

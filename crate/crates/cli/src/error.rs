use std::fmt;

/// Failure classes of the command line, mapped to exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed or inconsistent input (exit code 2).
    Input(String),
    /// The analysis needs something outside the implemented scope, such as
    /// an irrational pole or a coefficient with no algebraic form (exit 3).
    Unsupported(String),
    /// Files could not be written (exit code 1).
    Io(String),
    /// A self-check did not pass (exit code 1).
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Io(_) | CliError::Check(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Unsupported(_) => "unsupported",
            CliError::Io(_) => "io",
            CliError::Check(_) => "check",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Unsupported(m) | CliError::Io(m) | CliError::Check(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

use std::fmt;

/// Exit status for a run whose verdicts all pass.
pub const EXIT_PASS: i32 = 0;
/// At least one verdict failed.
pub const EXIT_FAIL: i32 = 1;
/// Invalid configuration or unusable output path.
pub const EXIT_USAGE: i32 = 2;
/// A numerical procedure did not converge.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(heisenmag::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Library(heisenmag::Error::Contract(_)) => EXIT_USAGE,
            CliError::Library(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Library(e) if e.is_numerical() => write!(f, "numerical failure: {e}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<heisenmag::Error> for CliError {
    fn from(e: heisenmag::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

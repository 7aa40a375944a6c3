use std::fmt;

/// Failures mapped onto the stable exit codes: 0 success, 2 usage,
/// 3 validation, 4 numeric failure. Plain I/O trouble exits 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Validation(String),
    Numeric(swipt_outage::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) | CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Parse(msg) => write!(f, "config parse error: {msg}"),
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Numeric(err) => write!(f, "numeric failure: {err}"),
            CliError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl From<swipt_outage::Error> for CliError {
    fn from(err: swipt_outage::Error) -> Self {
        use swipt_outage::Error as E;
        match err {
            E::NonConvergent { .. } => CliError::Numeric(err),
            E::InvalidDomain(_) | E::InvalidQuadratureSpec(_) => CliError::Numeric(err),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

use std::fmt;

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad configuration or incompatible inputs. Exit code 2.
    Usage(String),
    /// A numerical or domain failure reported by the library. Exit code 3.
    Numeric(outlier_lab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl From<outlier_lab::Error> for CliError {
    fn from(e: outlier_lab::Error) -> Self {
        CliError::Numeric(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Library errors raised while checking inputs count as usage errors.
pub fn invalid(e: outlier_lab::Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("missing required flag --{flag}"))
}

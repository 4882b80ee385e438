use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVARIANT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] cohphase::Error),

    #[error("{0}")]
    Invariant(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Typed name printed on the diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Core(e) => e.name(),
            CliError::Invariant(_) => "InvariantFailed",
            CliError::Io { .. } => "IoError",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Core(e) if is_numerical(e) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

/// Failures of the series or its evaluation, as opposed to a bad request.
pub fn is_numerical(e: &cohphase::Error) -> bool {
    use cohphase::Error::*;
    matches!(e, NotConverged { .. } | DomainExceeded { .. } | Overflow { .. } | NonFinite { .. })
}

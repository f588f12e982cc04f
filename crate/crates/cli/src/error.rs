use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line layer. Each maps onto one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// `location` is either `line L, column C` or a field path such as `re[1][0]`.
    #[error("{path}: parse error at {location}: {message}")]
    Parse {
        path: String,
        location: String,
        message: String,
    },
    #[error("{path}: field `{field}` has {found} entries, expected {expected}")]
    DimensionMismatch {
        path: String,
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(wradius_core::Error),
}

impl CliError {
    pub const EXIT_OK: i32 = 0;
    pub const EXIT_CHECK_FAILED: i32 = 1;
    pub const EXIT_USAGE: i32 = 2;
    pub const EXIT_NUMERICAL: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => Self::EXIT_NUMERICAL,
            // An unwritable report path is a configuration problem.
            CliError::Usage(_)
            | CliError::Parse { .. }
            | CliError::DimensionMismatch { .. }
            | CliError::Io { .. } => Self::EXIT_USAGE,
        }
    }
}

impl From<wradius_core::Error> for CliError {
    fn from(e: wradius_core::Error) -> Self {
        use wradius_core::Error as E;
        match e {
            E::NonConvergence { .. }
            | E::DepthExceeded { .. }
            | E::NotPsd { .. }
            | E::NotAccretive { .. }
            | E::NotHermitian { .. } => CliError::Numerical(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_split_by_kind() {
        let numerical = CliError::from(wradius_core::Error::NonConvergence { evaluations: 3 });
        assert_eq!(numerical.exit_code(), 3);
        let accretive = CliError::from(wradius_core::Error::NotAccretive { min_eigenvalue: -1.0 });
        assert_eq!(accretive.exit_code(), 3);
        let usage = CliError::from(wradius_core::Error::InvalidWeight(2.0));
        assert_eq!(usage.exit_code(), 2);
        assert!(usage.to_string().contains("weight"));
    }
}

use thiserror::Error;

/// Exit status: every run ends in exactly one of these.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] sphere_strings::Error),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use sphere_strings::Error as E;
        match self {
            CliError::Library(E::NoConvergence { .. } | E::ConstraintDrift { .. }) => EXIT_NO_CONVERGENCE,
            _ => EXIT_USAGE,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

use thiserror::Error;

/// CLI failure, carrying the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Rejected input: exit code 2.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Solver or check failure: exit code 1.
    #[error("failure: {0}")]
    Failure(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<quatkg::Error> for CliError {
    fn from(e: quatkg::Error) -> Self {
        use quatkg::Error as E;
        match e {
            E::InvalidDirection { .. }
            | E::InvalidParameter { .. }
            | E::DegenerateWavenumber { .. }
            | E::ComplexLimitDegeneracy { .. }
            | E::InvalidGrid(_)
            | E::EmptyStack => CliError::Invalid(e.to_string()),
            E::SingularSystem { .. }
            | E::InaccurateSolution { .. }
            | E::NonFinite
            | E::UndefinedFraction => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

use std::path::Path;

use momrec_core::Error;

/// Failure of one CLI job, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error("quadrature: {0}")]
    Quadrature(String),
    #[error("solver: {0}")]
    Solver(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Quadrature(_) => 3,
            CliError::Solver(_) => 4,
        }
    }

    /// Prefixes the message with `what`, keeping the exit code.
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
            CliError::Schema(m) => CliError::Schema(format!("{what}: {m}")),
            CliError::Quadrature(m) => CliError::Quadrature(format!("{what}: {m}")),
            CliError::Solver(m) => CliError::Solver(format!("{what}: {m}")),
        }
    }

    /// Maps a core error from a solver stage; the message keeps the stage name.
    pub fn solver(err: Error) -> Self {
        match err.root_cause() {
            Error::QuadratureFailure { .. } => CliError::Quadrature(err.to_string()),
            _ => CliError::Solver(err.to_string()),
        }
    }

    /// Maps a core error raised while validating an input file.
    pub fn schema(err: Error) -> Self {
        CliError::Schema(err.to_string())
    }
}

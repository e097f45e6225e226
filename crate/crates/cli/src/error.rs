use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] koppelman_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status: 2 for usage errors, 3 for numerical divergence,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use koppelman_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::InvalidInput(_) | E::DimensionMismatch { .. }) => 2,
            CliError::Core(E::Divergence(_) | E::Accuracy { .. } | E::Singular(_)) => 3,
            _ => 1,
        }
    }
}

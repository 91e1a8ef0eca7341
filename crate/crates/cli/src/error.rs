use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] satkernel::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 for bad arguments, 3 for violated preconditions, 4 for numerical
    /// failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use satkernel::Error as E;
        match self {
            CliError::Usage(_) | CliError::Library(E::Domain(_) | E::Configuration(_)) => 2,
            CliError::Library(E::Precondition(_)) => 3,
            CliError::Library(E::Numerical { .. }) => 4,
            _ => 1,
        }
    }
}

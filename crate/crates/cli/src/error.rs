use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed invocation; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Input that violates a domain invariant, or a failed check; exit code 1.
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Domain(_) | Self::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<geoquant::Error> for CliError {
    fn from(e: geoquant::Error) -> Self {
        Self::Domain(e.to_string())
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(#[from] transduction_core::Error),
    #[error("numerical error: {0}")]
    NonFinite(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    /// Process exit code: 1 for configuration and I/O problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io { .. } => 1,
            Self::Numerical(_) | Self::NonFinite(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

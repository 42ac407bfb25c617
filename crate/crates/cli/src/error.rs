use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: String,
        #[source]
        source: flw_core::Error,
    },
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] flw_core::Error),
}

impl CliError {
    pub fn input(path: &str, source: flw_core::Error) -> Self {
        CliError::Input { path: path.to_string(), source }
    }
}

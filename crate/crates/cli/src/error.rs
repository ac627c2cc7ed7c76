use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("results file {path} was written with config {found}, this run is {expected}; rerun without --resume or pass --overwrite")]
    HashMismatch { path: String, found: String, expected: String },

    #[error("cannot parse record: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] cullen_lehmer::Error),
}

impl CliError {
    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_string(), source }
    }

    /// Usage and configuration problems all exit with 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

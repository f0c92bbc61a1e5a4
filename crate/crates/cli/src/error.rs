use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unresolved reference: {0}")]
    Resolution(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("grid cell ({i},{j}): {source}")]
    Cell {
        i: u64,
        j: u64,
        #[source]
        source: evupdate::Error,
    },
    #[error(transparent)]
    Core(#[from] evupdate::Error),
}

impl CliError {
    /// Process exit status: every error surfaced here is an input error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

use thiserror::Error;

/// Every failure the library can report.
///
/// The variants are grouped so that a command-line front end can map them
/// onto stable exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("incompatible model: {0}")]
    Incompatible(String),

    #[error("degree sequence is not realizable: {0}")]
    NotRealizable(String),

    #[error("graph construction failed after {attempts} attempts")]
    ConstructionFailed { attempts: usize },

    #[error("no realizable degree sequence after {retries} retries")]
    RetriesExhausted { retries: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Data(_) | Error::Io { .. } => 3,
            Error::Incompatible(_) => 4,
            Error::NotRealizable(_) | Error::ConstructionFailed { .. } | Error::RetriesExhausted { .. } => 5,
        }
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

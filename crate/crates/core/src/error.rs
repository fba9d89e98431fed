use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the supported domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Euler–Maclaurin truncation could not meet its accuracy contract.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// `ζ(s)` vanished where it appears in a denominator.
    #[error("singularity: {0}")]
    Singularity(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("insufficient items: {items} rows for {clusters} clusters")]
    InsufficientItems { items: usize, clusters: usize },

    #[error("undefined similarity: zero-norm vector")]
    UndefinedSimilarity,

    #[error("dangling reference: {kind} `{id}` referenced by `{from}`")]
    DanglingReference {
        kind: &'static str,
        id: String,
        from: String,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

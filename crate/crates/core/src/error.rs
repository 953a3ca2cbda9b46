use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is singular (zero pivot at column {column})")]
    Singular { column: usize },

    #[error("matrix is not positive definite (non-positive pivot at column {column})")]
    NotPositiveDefinite { column: usize },

    #[error("matrix is rank deficient (|R[{column},{column}]| below threshold)")]
    RankDeficient { column: usize },

    #[error("degenerate margin: {axis} `{label}` has a zero total")]
    DegenerateMargin { axis: &'static str, label: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("task `{task}` / variant `{variant}` failed: {source}")]
    Kernel {
        task: String,
        variant: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

use std::path::PathBuf;

use thiserror::Error;

use crate::partition::PartitionViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at row {row}, column {col} of {matrix}")]
    NonFinite {
        matrix: &'static str,
        row: usize,
        col: usize,
    },

    #[error("invalid partitioning: {0}")]
    InvalidPartition(PartitionViolation),

    #[error("partitioning is not scalable: {0}")]
    NotScalable(PartitionViolation),

    #[error("sample standard deviation needs at least 2 training rows, got {n_train}")]
    TooFewTrainingRows { n_train: usize },

    #[error("degenerate fold {fold}: validation rows must be a nonempty proper subset of the samples")]
    DegenerateFold { fold: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("global cache lacks {0} required by the requested configuration")]
    CacheMissing(&'static str),

    #[error("parse error in {path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error("bad argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Argument(_) => 2,
            Error::Dimension(_) | Error::NonFinite { .. } => 3,
            Error::InvalidPartition(_) | Error::DegenerateFold { .. } => 4,
            Error::NotScalable(_) | Error::TooFewTrainingRows { .. } => 5,
            Error::Precondition(_) | Error::CacheMissing(_) | Error::Io(_) => 1,
        }
    }
}

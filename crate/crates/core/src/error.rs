use thiserror::Error;

/// Errors produced by the encoding, metric and homology routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("eigenvalue phase {phase} lies on or near the branch cut at ±π")]
    BranchCut { phase: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue})")]
    NotPsd { eigenvalue: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("invalid filtered complex: {0}")]
    InvalidComplex(String),

    #[error("centroid states coincide; classifier observable is zero")]
    DegenerateModel,

    #[error("encoding failed at point {index}: {source}")]
    Encoding {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::InvalidShape(msg.into())
    }
}

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not strictly interior to the body")]
    NotInterior,

    #[error("hyperplane does not meet the body")]
    EmptySection,

    #[error("hyperplane is tangent to the body (degenerate section)")]
    TangentSection,

    #[error("degenerate moment matrix (condition number {cond:.3e})")]
    DegenerateMoment { cond: f64 },

    #[error("unknown gallery body `{0}`")]
    UnknownGallery(String),

    #[error("invalid parameter `{name}`: {reason}")]
    BadParam { name: &'static str, reason: String },

    #[error("too few usable samples: {0}")]
    TooFewSamples(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn bad_param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::BadParam {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

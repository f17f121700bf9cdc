use thiserror::Error;

/// Errors raised while ingesting inputs or running the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("unsupported field characteristic {0} (expected 2, 3, 5 or 7)")]
    UnsupportedField(u32),

    #[error("simplex count exceeds the limit of {limit}")]
    SizeLimit { limit: usize },

    #[error("insufficient skeleton: degree {max_deg} needs simplices through dimension {needed}, complex is complete only through {available}")]
    InsufficientSkeleton {
        max_deg: usize,
        needed: usize,
        available: usize,
    },

    #[error("step functor hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("convention mismatch: {0:?} vs {1:?}")]
    ConventionMismatch(crate::vr::Convention, crate::vr::Convention),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Dimension(_) => "dimension",
            Error::InvalidMetric(_) => "invalid_metric",
            Error::UnsupportedField(_) => "unsupported_field",
            Error::SizeLimit { .. } => "size_limit",
            Error::InsufficientSkeleton { .. } => "insufficient_skeleton",
            Error::Hypothesis(_) => "hypothesis",
            Error::ConventionMismatch(..) => "convention_mismatch",
            Error::InvalidTable(_) => "invalid_table",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// Whether the error comes from a resource guard rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}

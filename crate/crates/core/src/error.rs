use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("ring {0} carries no order")]
    NoOrder(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("image leaves the chart V ∪ {{∞}}")]
    LeavesChart,
    #[error("points are not transversal")]
    NotTransversal,
    #[error("normalization catalog exhausted")]
    NormalizationFailed,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("degenerate endpoint in coordinate {0}")]
    DegenerateEndpoint(usize),
    #[error("points are equal")]
    EqualPoints,
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("unsupported projection: {0}")]
    UnsupportedProjection(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

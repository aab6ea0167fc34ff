use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid rational `{0}`: {1}")]
    BadRational(String, String),
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("point set too large: {0} points exceeds cap {1}")]
    SizeCap(usize, usize),
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("unknown distance class {0}")]
    UnknownClass(u32),
    #[error("budget exhausted after {nodes} nodes (best known: {best})")]
    BudgetExhausted { nodes: u64, best: usize },
    #[error("graph too large for brute force: {0} > {1}")]
    BruteCap(usize, usize),
    #[error("vertex sets differ: {0} vs {1}")]
    VertexMismatch(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

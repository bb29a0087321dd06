use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("audit violation: {0}")]
    AuditViolation(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPolygon(_) => "invalid_polygon",
            Error::InvalidSubdivision(_) => "invalid_subdivision",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::AuditViolation(_) => "audit_violation",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

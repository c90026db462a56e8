use thiserror::Error;

use crate::mesh::StructuralError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    #[error(transparent)]
    Structural(#[from] StructuralError),

    #[error("closure failure: residual {residual:.3e} exceeds {tolerance:.1e} ({detail})")]
    ClosureFailure {
        residual: f64,
        tolerance: f64,
        detail: String,
    },

    #[error("node budget exceeded: explored {explored} nodes, cap {cap}")]
    BudgetExceeded { explored: u64, cap: u64 },

    #[error("invalid tiling document: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::Structural(_) => "structural",
            Error::ClosureFailure { .. } => "closure_failure",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Document(_) => "document",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

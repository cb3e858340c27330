use thiserror::Error;

/// Errors surfaced by the simulator, optimizers, and harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid sizes, indices, or experiment parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical precondition (unitarity, normalization) failed.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The request exceeds what this build can compute, e.g. a dense
    /// ground-state solve above the qubit limit.
    #[error("capability error: {0}")]
    Capability(String),

    /// A relative error against a zero reference energy.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// The evaluation budget cannot cover the requested evaluations.
    #[error("budget exhausted: {used} of {budget} evaluations used, {requested} requested")]
    BudgetExhausted { used: u64, budget: u64, requested: u64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// Process exit code used by the CLI: 2 for configuration problems,
    /// 3 for numeric failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Capability(_) | Error::Json(_) => 2,
            Error::Numeric(_) | Error::UndefinedMetric(_) => 3,
            Error::BudgetExhausted { .. } | Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

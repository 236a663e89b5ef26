//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration; the message names the offending item.
    #[error("configuration error: {0}")]
    Config(String),

    /// The evaluation budget is spent; no fitness value was produced.
    #[error("evaluation budget exhausted after {used} evaluations")]
    BudgetExhausted { used: u64 },

    /// A statistical routine was handed too little data to say anything.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An API precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Algorithm known by name but not runnable in this build.
    #[error("algorithm `{0}` is not implemented (external reference entry)")]
    NotImplemented(String),

    /// Malformed structured input (CSV/JSON), 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn is_budget_exhausted(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}

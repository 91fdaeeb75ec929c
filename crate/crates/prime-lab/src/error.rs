//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain: {0}")]
    Domain(String),

    /// Structurally invalid or inadmissible tuple pattern.
    #[error("pattern: {0}")]
    Pattern(String),

    /// Requested limit exceeds the configured sieve budget.
    #[error("budget exceeded: x = {x} is above the sieve budget {budget}")]
    BudgetExceeded { x: u64, budget: u64 },

    /// Requested tolerance unreachable at working precision.
    #[error("precision: requested {requested:e}, best achieved {achieved:e}")]
    Precision { requested: f64, achieved: f64 },

    /// Interval endpoints collapsed or crossed.
    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),

    /// Malformed input (CLI arguments, cache lines, table text).
    #[error("parse: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pattern(_) => "pattern",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::Precision { .. } => "precision",
            Error::DegenerateInterval(_) => "degenerate-interval",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

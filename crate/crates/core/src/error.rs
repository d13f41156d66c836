//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A certified series did not close its tail bound within the term budget.
    #[error("series budget exhausted after {terms} terms in {context}")]
    BudgetExhausted { context: &'static str, terms: usize },

    /// Fundamental-domain reduction did not terminate; input is pathological
    /// (typically y extremely close to the real axis).
    #[error("fundamental-domain reduction did not terminate within {limit} moves")]
    ReductionLimit { limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid Cauchy-Green tensor: {0}")]
    InvalidTensor(String),

    /// A lemma audit was requested outside the lemma's hypothesis region.
    #[error("{lemma}: hypothesis violated: {detail}")]
    Hypothesis { lemma: String, detail: String },

    /// A root finder found no sign change on the scanned interval. The table
    /// carries the scanned (x, f(x)) pairs for diagnosis.
    #[error("no sign change bracketing {name} on [{lo}, {hi}]")]
    BracketFailure {
        name: String,
        lo: f64,
        hi: f64,
        table: Vec<(f64, f64)>,
    },

    /// A finite-difference step rounded to zero relative to the base point.
    #[error("finite-difference step underflow at {at}")]
    StepUnderflow { at: f64 },

    /// Two evaluation routes that must agree did not.
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
}

use thiserror::Error;

/// Errors raised by the exact kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A work budget (factorization steps, enumerated tuples, dense degree) ran out.
    /// This means the input is too large, never that an answer is wrong.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A combined radical order no longer fits in 64 bits.
    #[error("radical order overflows 64 bits")]
    ExponentOverflow,
    /// A sum mentions a prime or exponent denominator the basis cannot express.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    /// A numeric interval is too wide to decide the question asked of it.
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors raised by the library.
///
/// Work-budget and precision failures mean "input too hard at the current
/// settings"; they never stand in for a wrong answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization of {n} exceeded the work budget of {budget} iterations")]
    WorkBudget { n: String, budget: u64 },
    #[error("primality of {0} cannot be certified (beyond the deterministic Miller-Rabin range)")]
    Uncertified(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("could not decide {what} within {bits} bits of precision")]
    PrecisionExhausted { what: String, bits: u32 },
    #[error("range error: {0}")]
    Range(String),
    #[error("integrality violation: {0}")]
    Integrality(String),
    #[error("postcondition violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

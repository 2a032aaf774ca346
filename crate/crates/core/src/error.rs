use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid number specification: {0}")]
    InvalidSpec(String),
    #[error("precision cap of {cap} bits reached")]
    PrecisionCap { cap: u32 },
    #[error("value cannot be separated from zero (possible exact root of a degree {degree} polynomial)")]
    PossibleRoot { degree: usize },
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no admissible candidate: {0}")]
    NoCandidate(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("pattern has {found} entries equal to {value}, needed {needed}")]
    InsufficientOccurrences { value: u8, needed: usize, found: usize },

    #[error("invalid highest weight: {0}")]
    InvalidWeight(String),

    #[error("operation requires rank 2 (three weight components), got rank {0}")]
    UnsupportedRank(usize),

    #[error("rank must be at least 1")]
    ZeroRank,

    #[error("q scale must be positive, got {0}")]
    InvalidQScale(i64),

    #[error("specialization lists {given} variables, character has {expected}")]
    SpecializationArity { expected: usize, given: usize },

    #[error("initial prefix ({a}, {b}) is invalid at level {k}")]
    InvalidInitial { a: u32, b: u32, k: u32 },

    #[error("character windows disagree: {0}")]
    WindowMismatch(String),

    #[error("no character supplied for weight {0}")]
    MissingCharacter(String),

    #[error("weight {0} is not strictly positive")]
    NotStrictlyPositive(String),

    #[error("identity term chi_{{a={a},b={b}}} lies outside 0 <= a+b <= k={k}")]
    OutOfDomain { a: u32, b: u32, k: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

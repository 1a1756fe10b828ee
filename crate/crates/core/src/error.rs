use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("base must be at least 3, got {0}")]
    BaseTooSmall(u64),
    #[error("digit {digit} is outside 0..{n}")]
    DigitOutOfRange { digit: u64, n: u64 },
    #[error("digit set must contain 0 and n-1 = {0}")]
    MissingEndpoint(u64),
    #[error("duplicate digit {0}")]
    DuplicateDigit(u64),
    #[error("digit set needs at least two digits")]
    TooFewDigits,
    #[error("operation requires a canonical digit set (0, n-1 in A, A within 0..n)")]
    NotCanonical,
    #[error("malformed digit list {0:?}")]
    Parse(String),
    #[error("digit set is not {n}-very-good")]
    NotVeryGood { n: u64 },
    #[error("tower step k must be 0, 1 or 2, got {0}")]
    InvalidTowerStep(u64),
    #[error("tower output failed re-verification: {0}")]
    TowerVerification(String),
    #[error("no base set for n = {0}")]
    MissingBase(u64),
    #[error("construction needs n >= {min}, got {n}")]
    ConstructionRange { n: u64, min: u64 },
    #[error("exhaustive search supports 3 <= n <= {max}, got {n}; use the heuristic search")]
    ExhaustiveInfeasible { n: u64, max: u64 },
    #[error("oracle budget exceeded at depth {depth}: {work} > {budget}; reduce the depth")]
    BudgetExceeded { depth: u32, work: u64, budget: u64 },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("invalid table: {0}")]
    Table(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 65536]")]
    NotPrime(u64),
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("residue {0} out of range for modulus {1}")]
    OutOfRange(u64, u32),
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("evaluation points are not pairwise distinct")]
    DuplicatePoints,
    #[error("GRS multiplier is zero")]
    ZeroMultiplier,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("decoding failed: error beyond the decoding radius")]
    DecodingFailure,
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("iteration budget of {0} exhausted")]
    IterationBudgetExceeded(u64),
    #[error("64 consecutive singular information-set draws")]
    SingularStreak,
    #[error("depth constraint violated: {0}")]
    DepthInfeasible(String),
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("optimizer did not converge within its budget")]
    OptimizerNoConverge,
    #[error("distributions have different supports")]
    SupportMismatch,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

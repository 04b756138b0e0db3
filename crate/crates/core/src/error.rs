use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("r must be at least {min}, got {r}")]
    InvalidR { r: u32, min: u32 },
    #[error("index {index} out of range for r = {r}")]
    IndexOutOfRange { index: u32, r: u32 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("too many insertions: n = {n} exceeds r + 1 = {bound}")]
    TooManyInsertions { n: usize, bound: u32 },
    #[error("unstable moduli space: (g, n) = ({g}, {n})")]
    Unstable { g: u32, n: usize },
    #[error("forbidden residue: a = {a} is congruent to r - 1 modulo r = {r}")]
    ForbiddenResidue { r: u32, a: u32 },
    #[error("class is zero: {0}")]
    ZeroClass(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("interpolation failed: {0}")]
    Interpolation(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Precondition failures map to exit code 1, broken internal identities to 2.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible(_) | Error::Interpolation(_) | Error::Validation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

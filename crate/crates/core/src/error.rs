use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor interval contains zero")]
    DivisorContainsZero,
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("row scale factor must be nonzero")]
    ZeroScale,
    #[error("interval at ({row}, {col}) has lower endpoint above upper endpoint")]
    InvalidInterval { row: usize, col: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid pg-diagonal: {0}")]
    InvalidDiagonal(String),
    #[error("invalid field element {value} at ({row}, {col}): {reason}")]
    InvalidFieldElement {
        row: usize,
        col: usize,
        value: String,
        reason: String,
    },
    #[error("{modulus} is not a prime modulus")]
    NotPrime { modulus: u64 },
    #[error("{what}: {required} exceeds the configured limit of {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("Fourier-Motzkin elimination produced {constraints} constraints, limit is {limit}")]
    EliminationBlowup { constraints: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SizeLimitExceeded { .. } | Error::EliminationBlowup { .. }
        )
    }
}

use alloc::string::String;

/// Errors raised by the exact algebra and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("linear map is singular (determinant zero)")]
    SingularMap,

    #[error("guard `{guard}` exceeded: {value} > {limit}")]
    GuardExceeded {
        guard: &'static str,
        limit: usize,
        value: usize,
    },

    #[error("noncrossing pairings need an even size, got {0}")]
    OddLength(usize),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("negative entry in a map that must be completely positive")]
    NegativeEntry,

    #[error("g₂(0) and g₂(1) are linearly dependent (g₂(1) has equal components)")]
    DegenerateBasis,

    #[error("residual is not linear in `{var}`")]
    NotLinear { var: &'static str },

    #[error("parameters admit a normalizing automorphism; case classification does not apply")]
    AutomorphismExists,

    #[error("rescaling factor must be positive")]
    NonPositiveScale,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Failures reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate functional: atomic and singular parts are both zero")]
    DegenerateFunctional,

    #[error("functional is not normalized: ||h||_1 + gamma = {0}")]
    NotNormalized(f64),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("not a projection onto ker f: pairing <f, y> = {0}, expected 1")]
    NotAProjection(String),

    #[error("outside closed-form regime, result numerical only")]
    OutsideClosedFormRegime,

    #[error("gap sequence undefined: minimal projection may exist")]
    GapUndefined,

    #[error("enumeration refused: {0} coordinates exceeds the limit of {max}", max = crate::projection_norm::MAX_ENUMERATION_COORDS)]
    EnumerationTooLarge(usize),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

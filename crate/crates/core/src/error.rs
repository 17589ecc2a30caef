use thiserror::Error;

/// Errors raised by the engine. Identity failures (`IdentityViolation`)
/// signal implementation bugs, since the identities checked are theorems.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ray {index} {ray:?} is not primitive")]
    NonPrimitiveRay { index: usize, ray: Vec<i64> },
    #[error("cone {cone:?} is not unimodular (|det| = {det})")]
    NonUnimodularCone { cone: Vec<usize>, det: i128 },
    #[error("wall {wall:?} borders {count} maximal cones (expected 2)")]
    WallConditionViolation { wall: Vec<usize>, count: usize },
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("maximal cones overlap: a generic vector lies in {0} of them")]
    OverlappingCones(usize),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("direction is not positive on ray {ray:?} (pairing {value})")]
    NonPositiveDirection { ray: Vec<i64>, value: i64 },
    #[error("sequence is not exact: {0}")]
    InexactSequence(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("bases of the splitting are not complementary (det = {0})")]
    NonComplementarySplit(i128),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("completion precisions differ ({0} vs {1})")]
    PrecisionMismatch(i32, i32),
    #[error("local factor must have constant term 1")]
    NonUnitConstantTerm,
    #[error("empty coefficient prefix")]
    EmptyPrefix,
    #[error("genus {0} is outside the exact genus-0 mode")]
    UnsupportedGenus(u32),
    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("raw count {raw} not divisible by torus order {order}")]
    NonIntegerQuotient { raw: u128, order: u128 },
    #[error("unsupported field size q = {0}")]
    UnsupportedField(u64),
    #[error("identity failed: {0}")]
    IdentityViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 <= p < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {0} out of range (need 1 <= n <= {1})")]
    DegreeOutOfRange(usize, usize),
    #[error("invalid one-line notation: {0}")]
    InvalidOneLine(String),
    #[error("map value at rank {0} is zero; group maps must vanish nowhere")]
    ZeroValue(usize),
    #[error("wrong number of values: got {0}, expected {1}")]
    WrongValueCount(usize, usize),
    #[error("matrix entry ({0},{1}) is zero")]
    ZeroEntry(usize, usize),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("indices must be distinct")]
    IndicesEqual,
    #[error("map is not central")]
    NotCentral,
    #[error("map is not normalized")]
    NotNormalized,
    #[error("map is not fully normalized")]
    NotFullyNormalized,
    #[error("operation defined only for degree {0}")]
    WrongDegree(usize),
    #[error("operation needs degree at least {0}")]
    NeedsDegreeAtLeast(usize),
    #[error("exact expansion unavailable for n = {0} (exact mode needs n <= 4)")]
    ExactModeTooLarge(usize),
    #[error("field too small for randomized testing (need p > 4n, got p = {0})")]
    FieldTooSmall(u64),
    #[error("decision procedure unavailable over the rationals")]
    RationalsNotDecidable,
    #[error("degree {0} too large for the pair sweep (need n <= {1})")]
    DegreeTooLarge(usize, usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("enumeration budget exceeded ({0} elements > {1})")]
    BudgetExceeded(u128, u128),
    #[error("operation needs a finite field")]
    InfiniteField,
    #[error("scale too large: {0}")]
    ScaleTooLarge(String),
    #[error("block shapes do not match the cardinality lists")]
    BlockShapeMismatch,
    #[error("similarity block {0} is singular")]
    SingularBlock(usize),
    #[error("map is not a transformation for the given pair")]
    NotATransformation,
    #[error("coherence witness fails its defining identity")]
    InvalidWitness,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("invalid input: {0}")]
    Parse(String),
}

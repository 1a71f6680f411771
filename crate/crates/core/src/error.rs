use thiserror::Error;

/// Every failure the library reports. Checks that merely *answer no* are
/// not errors; these are contract violations or computations that could not
/// be completed at the configured bounds.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient field mismatch")]
    FieldMismatch,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("unsupported prime: {0}")]
    UnsupportedPrime(String),
    #[error("unsupported base ring: {0}")]
    UnsupportedBase(String),
    #[error("denominator is not a unit: {0}")]
    NonUnitDenominator(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("indeterminate at the current precision: {0}")]
    Indeterminate(String),
    #[error("model is not local: {0}")]
    NotLocal(String),
    #[error("not finite-dimensional under the supplied bounds: {0}")]
    NotFiniteDimensional(String),
    #[error("element is not in the ring S: {0}")]
    NotInRing(String),
    #[error("element is not a member of R: {0}")]
    NotAMember(String),
    #[error("ideal does not meet the multiplicative set: {0}")]
    IdealMissesMultiplicativeSet(String),
    #[error("hypothesis not certified within bounds: {0}")]
    HypothesisNotCertified(String),
    #[error("decomposition not found: {0}")]
    DecompositionNotFound(String),
    #[error("no witness found in the candidate family: {0}")]
    WitnessNotFound(String),
    #[error("ideal is not maximal: {0}")]
    NotMaximal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors surfaced by the library.  Variants that carry a witness (a unit, a
/// prime, a bound) name the exact object that violated the contract so that
/// callers can report it without re-deriving anything.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("cyclotomic order {0} exceeds the configured bound {1}")]
    CycloOrderOverflow(u64, u64),

    #[error("division by zero in Q(zeta_{0})")]
    CycloDivisionByZero(u64),

    #[error("invalid cyclotomic encoding: {0}")]
    CycloEncoding(String),

    #[error("d = {0} does not define a supported field (need d < 0 squarefree)")]
    BadField(i64),

    #[error("operation requires class number one, but d = {0} is not in the supported list")]
    ClassNumber(i64),

    #[error("invalid ideal triple (a, b, c) = ({0}, {1}, {2})")]
    BadIdeal(i128, i128, i128),

    #[error("{0} is not prime")]
    NotPrime(i128),

    #[error("ideal of norm {0} is not principal within the search region")]
    NotPrincipal(i128),

    #[error("residue character: exponent vector length {0} does not match basis rank {1}")]
    BadCharacter(usize, usize),

    #[error("unit compatibility fails at u = {0}: eps(u) * u^(-a) * conj(u)^(-b) != 1")]
    UnitCompatibility(String),

    #[error("element {0} is not a unit modulo the conductor")]
    NotUnit(String),

    #[error("conductors are not coprime")]
    NotCoprime,

    #[error("characters live over different fields (d = {0} vs d = {1})")]
    FieldMismatch(i64, i64),

    #[error("weight hypothesis violated: (k1, l1) = (k2 + 1, l2 + 1); pass the bypass flag to search anyway")]
    WeightHypothesis,

    #[error("infinity type class is unsupported for this operation")]
    UnsupportedTypeClass,

    #[error("weight (0, 0) is invalid for this infinity type class")]
    ZeroWeightExcluded,

    #[error("sample set is empty; refusing to certify anything")]
    EmptySampleSet,

    #[error("sample set is invalid: {0}")]
    BadSampleSet(String),

    #[error("p = {0} does not split in the field")]
    PrimeNotSplit(u64),

    #[error("p = {0} divides the value order L = {1}; only unramified coefficient embeddings are supported")]
    RamifiedEmbedding(u64, u64),

    #[error("p-adic precision {0} is insufficient (need at least {1})")]
    InsufficientPrecision(u32, u32),

    #[error("configured bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("internal consistency check failed: {0}")]
    CheckFailed(String),

    #[error("base-change eigenvalue mismatch at the prime above {0}")]
    BaseChangeMismatch(i128),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

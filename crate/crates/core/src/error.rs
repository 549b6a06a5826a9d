use thiserror::Error;

/// Errors raised by field construction, code construction and the transceivers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} does not fit the supported range")]
    FieldTooLarge { p: u32, m: usize },
    #[error("polynomial must be monic of degree {expected} over GF({p}), got {got:?}")]
    BadPolynomial { p: u32, expected: usize, got: Vec<u32> },
    #[error("polynomial {poly:?} is not primitive over GF({p})")]
    NotPrimitive { p: u32, poly: Vec<u32> },
    #[error("no default primitive polynomial for GF({p}^{m})")]
    NoDefaultPolynomial { p: u32, m: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("power index {0} out of range")]
    PowerOutOfRange(i64),
    #[error("tuple has length {got}, expected {expected}")]
    TupleLength { expected: usize, got: usize },
    #[error("tuple component {0} is not an element of the prime field")]
    TupleDigit(u32),
    #[error("multiplication is unavailable in tuple-only field GF({p}^{m})")]
    NoMultiplication { p: u32, m: usize },
    #[error("cannot parse field descriptor: {0}")]
    Descriptor(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{users} users exceed the bound {bound}")]
    TooManyUsers { users: usize, bound: usize },
    #[error("enumeration of 2^{0} sum patterns exceeds the guard")]
    EnumerationGuard(usize),
    #[error("element is not a member of the pair")]
    NotInPair,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("sum pattern is not reachable by any codeword")]
    UnreachableFfsp,
    #[error("zero sum pattern produced by a certified code")]
    ZeroFfsp,
    #[error("code construction failed: {0}")]
    Construction(String),
    #[error("detector mode requires a systematic generator")]
    NotSystematic,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by polynomial, order, family and representation operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has constant term 0, so x is not invertible modulo it and its order is undefined")]
    ZeroConstantTerm,
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
    #[error("no period found within scan bound {bound}")]
    BoundExceeded { bound: u64 },
    #[error("polynomial does not divide 1 + x^{n}, so {n} is not a period")]
    NotAPeriod { n: u64 },
    #[error("cannot view a polynomial of degree {degree} as having degree {n}")]
    LengthBelowDegree { n: u64, degree: u64 },
    #[error("operation needs {bits} bits, over the cap of {cap} (set F2REP_BIT_CAP to raise it)")]
    BitCapExceeded { bits: u64, cap: u64 },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid digit set: {0}")]
    InvalidDigitSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

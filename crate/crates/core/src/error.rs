use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be positive")]
    NonPositive,
    #[error("{what} = {value} exceeds the supported bound {bound}")]
    TooLarge { what: &'static str, value: String, bound: String },
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error("modulus {0} is even; only odd moduli are supported")]
    EvenModulus(u64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("{0} is not a perfect square")]
    NotSquare(u64),
    #[error("{0} is not congruent to 3 mod 4")]
    NotThreeModFour(u64),
    #[error("{n} has the prime factor {prime}, which is not congruent to 1 mod 4")]
    PrimeNotOneModFour { n: u64, prime: u64 },
    #[error("discriminant {0} must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("-{0} is not a fundamental discriminant")]
    NotFundamental(u64),
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("quadratic form is not integral")]
    NotIntegral,
    #[error("quadratic form is not primitive")]
    NotPrimitive,
    #[error("expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("operation needs a rational shift vector")]
    IrrationalShift,
    #[error("need at least {needed} usable records, found {usable} ({dropped} dropped)")]
    TooFewRecords { needed: usize, usable: usize, dropped: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

impl Error {
    pub(crate) fn too_large(what: &'static str, value: impl ToString, bound: impl ToString) -> Self {
        Error::TooLarge { what, value: value.to_string(), bound: bound.to_string() }
    }
}

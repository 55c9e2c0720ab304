use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(String),

    #[error("{0} is a perfect square")]
    PerfectSquare(u64),

    #[error("radicand must be at least 2, got {0}")]
    RadicandTooSmall(u64),

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("{0} is not in the family (some prime divisor is 3 mod 4)")]
    NotInFamily(u64),

    #[error("invalid discriminant {0}: {1}")]
    InvalidDiscriminant(i64, &'static str),

    #[error("discriminant {delta} exceeds the configured bound {bound}")]
    DiscriminantBound { delta: i64, bound: i64 },

    #[error("class group inconsistency for discriminant {delta}: {what}")]
    ClassGroupInconsistent { delta: i64, what: String },

    #[error("N = exp({0}) is too small for the nice predicate (need N > e^(e^e))")]
    ScaleTooSmall(f64),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("conic search exhausted for ({a}, {b}) within |x|,|y|,|z| <= {bound}")]
    ConicSearchExhausted { a: i64, b: i64, bound: i64 },

    #[error("inadmissible Redei triple ({a}, {b}, {c}): {why}")]
    InadmissibleTriple { a: u64, b: u64, c: u64, why: String },

    #[error("could not normalise the Redei symbol for ({a}, {b}, {c}) after {attempts} solutions")]
    SymbolNormalization {
        a: u64,
        b: u64,
        c: u64,
        attempts: usize,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("identity check failed: {0}")]
    IdentityFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

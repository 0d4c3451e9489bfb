use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is too large (must be below 2^15)")]
    ModulusTooLarge(u32),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("field mismatch: Z_{left} vs Z_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("multiplication table is malformed: {0}")]
    MalformedTable(String),
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    AssociativityViolation { i: usize, j: usize, k: usize },
    #[error("elements belong to different algebras")]
    ParentMismatch,
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("identity is not multilinear; use exhaustive mode")]
    NotMultilinear,
    #[error("this operation requires an odd prime, got p = 2")]
    EvenCharacteristicUnsupported,
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("ring axiom `{axiom}` fails on ({a}, {b}, {c})")]
    RingAxiom { axiom: &'static str, a: usize, b: usize, c: usize },
    #[error("premise fails: {0}")]
    PremiseFailure(String),
    #[error("ring lies outside the variety: {0}")]
    OutOfVariety(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

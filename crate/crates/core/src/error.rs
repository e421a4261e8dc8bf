use thiserror::Error;

/// Errors raised by the arithmetic, transform and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("{c} is not a unit modulo {n}")]
    NotAUnit { c: i64, n: u64 },
    #[error("{beta} does not generate a subgroup of order {f} modulo {n}, or the norm is not fixed")]
    BadSubgroup { beta: i64, f: u64, n: u64 },
    #[error("element is not in the requested subfield")]
    NotInSubfield,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds the budget {budget}")]
    TooLarge { size: u64, budget: u64 },
    #[error("supplied element is not a generator of the multiplicative group")]
    NotAGenerator,
    #[error("zero has no index")]
    ZeroHasNoIndex,
    #[error("F_(p^{s}) is not a subfield of F_(p^{r})")]
    BadSubfield { s: u32, r: u32 },
    #[error("numeric Gaussian periods need r = 1 and p <= {threshold}; use the characteristic polynomial")]
    UseCharPolyInstead { threshold: u64 },
    #[error("axiom ({clause}) fails: {detail}")]
    AxiomViolation { clause: String, detail: String },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("points do not lie in the same fiber")]
    FiberMismatch,
    #[error("no solution can be extracted: {0}")]
    NotExtractable(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors surfaced by the library. Validation *reports* (which enumerate
/// axiom failures instead of aborting) are not errors; see the `*Report`
/// types next to each validator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entries from different fields: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("containment violated: {context}; witness vector {witness}")]
    ContainmentViolated { context: String, witness: String },

    #[error("not a chain map at degree {degree}: {detail}")]
    NotChainMap { degree: i64, detail: String },

    #[error("algebra is not local (or its residue field is larger than the base field)")]
    NotLocal,

    #[error("bound {given} too small: need at least {required} ({context})")]
    InsufficientBound {
        given: i64,
        required: i64,
        context: String,
    },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("source module is not recognized as graded-free on a semibasis")]
    NotGradedFree,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

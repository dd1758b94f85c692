use thiserror::Error;

/// Errors raised by the algebraic and model-checking layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not monic irreducible")]
    NotIrreducible(String),
    #[error("factorization unsupported: {0}")]
    UnsupportedFactorization(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("kernel configuration: {0}")]
    Config(String),
    #[error("kernel configuration mismatch")]
    ConfigMismatch,
    #[error("invalid generator: {0}")]
    Generator(String),
    #[error("model: {0}")]
    Model(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("formula: {0}")]
    Formula(String),
    #[error("sequence system: {0}")]
    SeqSystem(String),
    #[error("unsupported configuration: {0}")]
    Scope(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

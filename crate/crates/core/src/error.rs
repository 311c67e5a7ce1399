use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("materialization needs {needed} elements, budget is {budget}")]
    SizeOverflow { needed: u128, budget: usize },

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("invalid rank {rank}: must be in 1..={max}")]
    InvalidRank { rank: usize, max: usize },

    #[error("invalid adapter spec: {0}")]
    InvalidSpec(String),

    #[error("base parameters have zero norm")]
    ZeroBaseNorm,

    #[error("vector has zero norm")]
    ZeroNorm,

    #[error("embedding set `{0}` is empty")]
    EmptySet(String),

    #[error("length mismatch: {left} generated vs {right} prompts")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("training diverged at step {step} (loss {loss})")]
    DivergenceDetected { step: usize, loss: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate layer `{0}`")]
    DuplicateLayer(String),

    #[error("layer `{layer}`: dimension `{field}` must be positive")]
    NonPositiveDim { layer: String, field: String },

    #[error("schema version {found} not supported (expected {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {index} out of range (valid: 0..{len})")]
    Index { index: usize, len: usize },

    #[error("projected block has zero weight")]
    UndefinedBlock,

    #[error("step size dt = {dt} exceeds 0.1/E(n_max) = {limit}")]
    StepSize { dt: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

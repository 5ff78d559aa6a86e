use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("gamble is not an element of the option set")]
    FNotInSet,
    #[error("criterion incompatible with model: {0}")]
    CriterionMismatch(String),
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("codomain cap exceeded: {0}")]
    CapExceeded(String),
    #[error("operation requires a vertex-form credal set")]
    VertexFormRequired,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

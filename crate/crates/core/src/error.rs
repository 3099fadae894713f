use thiserror::Error;

/// Failure while obtaining one observation from a simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("protocol error: {message} (payload {payload:?})")]
    Protocol { message: String, payload: String },
    #[error("simulator returned a non-finite observation ({0})")]
    NonFinite(f64),
    #[error("simulator i/o failure: {0}")]
    Io(String),
    #[error("simulator exited: {0}")]
    Exited(String),
    #[error("simulator did not reply within {0:?}")]
    Timeout(std::time::Duration),
}

impl EvalError {
    pub(crate) fn protocol(message: impl Into<String>, payload: impl Into<String>) -> Self {
        EvalError::Protocol {
            message: message.into(),
            payload: payload.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GmabError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("solution {0:?} lies outside the search space")]
    OutOfBounds(Vec<i64>),
    #[error("genetic operator: {0}")]
    Genetic(String),
    #[error("memory: {0}")]
    Memory(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

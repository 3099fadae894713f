use gmab_core::{EvalError, GmabError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("aggregate: {0}")]
    Aggregate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Gmab(#[from] GmabError),
}

impl From<EvalError> for BenchError {
    fn from(e: EvalError) -> Self {
        BenchError::Gmab(e.into())
    }
}

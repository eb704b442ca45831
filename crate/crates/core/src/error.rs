use std::io;

use thiserror::Error;

use crate::matching::MatchingDefect;
use crate::model::ValidationReport;

pub type Result<T> = std::result::Result<T, FleetError>;

#[derive(Debug, Error)]
pub enum FleetError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),
    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("matching is not maximum: {0}")]
    NotMaximum(MatchingDefect),
    /// Following matched successors returned to an already visited trip.
    #[error("internal invariant violated: successor cycle through trips {cycle:?}")]
    SuccessorCycle { cycle: Vec<usize> },
    #[error("oracle refused: n = {n} exceeds bound {bound}")]
    OracleBound { n: usize, bound: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

use crate::conditions::{ConvergenceReport, Gate};

#[derive(Debug, Error)]
pub enum OrliczError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("inadmissible smoothness: n = {n}, s = {s}; an embedding into a space of continuous functions requires s < n + 1")]
    Inadmissible { n: u32, s: f64 },

    #[error("no embedding: gate {gate} diverges")]
    NoEmbedding { gate: Gate, report: Box<ConvergenceReport> },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("evaluation failed at r = {at}: {detail}")]
    Evaluation { at: f64, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, OrliczError>;

//! Training data preparation: concise targets, subset sampling, ratio mixing
//! and prompt rendering.

mod mix;
mod pool;
mod prompt;
mod streamline;

pub use mix::{allocate, mix_phases, parse_ratio, sample_sa, MixSpec};
pub use pool::{write_items, DatasetPool, MixedItem, PoolItem, Provenance};
pub use prompt::{render_prompt, PromptMode};
pub use streamline::streamline;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("target does not parse under the schema: {diagnosis}")]
    UnparseableTarget { diagnosis: String },
    #[error("pool `{0}` is empty")]
    EmptyPool(String),
    #[error("pool `{pool}` item {index}: target does not parse under the pool schema")]
    BadTarget { pool: String, index: usize },
    #[error("pool `{pool}` item {index}: {diagnosis}")]
    StreamlineFailed {
        pool: String,
        index: usize,
        diagnosis: String,
    },
    #[error("pool `{pool}` has {available} items, {requested} requested")]
    PoolTooSmall {
        pool: String,
        requested: usize,
        available: usize,
    },
    #[error("invalid ratio: {0}")]
    InvalidRatio(String),
    #[error("infeasible allocation: {0}")]
    Infeasible(String),
    #[error("{source_name} line {line}: {message}")]
    BadLine {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

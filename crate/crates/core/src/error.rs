use thiserror::Error;

use crate::model::KRange;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length {n} outside supported range {min}..={max}")]
    LengthOutOfRange { n: u32, min: u32, max: u32 },

    #[error("{engine} limited to n <= {limit} (got {n}); lift the guard to run anyway")]
    GuardExceeded {
        engine: &'static str,
        n: u32,
        limit: u32,
    },

    #[error("magic constant {k} outside feasible range {range}")]
    ConstantOutOfRange { k: i64, range: KRange },

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("a single-vertex path has no reversal pair")]
    NoReversalPair,

    #[error("worker count must be positive")]
    NoWorkers,

    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

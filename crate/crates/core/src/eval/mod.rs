//! Exact-match scoring, dataset aggregation, model ranking and top-N sweeps.

mod ranking;
mod scoring;
mod sweep;

use thiserror::Error;

use crate::error::FusionError;

pub use ranking::{
    ensemble_latency, order_profiles, rank_models, validate_profiles, LatencyFps, RankingMode,
};
pub use scoring::{
    fuse_corpus, is_correct, macro_average, mean_rate, recognition_rate, DatasetReport,
};
pub use sweep::{sweep_top_n, StrategyRate, SweepReport, SweepRow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("sample {sample:?} has no ground truth")]
    MissingGroundTruth { sample: String },
    #[error("no fused prediction for sample {sample:?}")]
    UncoveredSample { sample: String },
    #[error("cannot aggregate an empty list")]
    EmptyInput,
    #[error("accuracy rank {rank} appears more than once")]
    DuplicateRank { rank: u32 },
    #[error("accuracy rank {rank} is outside 1..={count}")]
    RankOutOfRange { rank: u32, count: usize },
    #[error("model {model:?} is listed more than once")]
    DuplicateModel { model: String },
    #[error("model {model:?} has invalid latency {value} ms")]
    InvalidLatency { model: String, value: f64 },
    #[error("ensemble size {n} is outside 1..={len}")]
    NOutOfRange { n: usize, len: usize },
    #[error("sample {sample:?} has no prediction from model {model:?}")]
    MissingModelPrediction { sample: String, model: String },
    #[error("no fusion strategies requested")]
    NoStrategies,
    #[error("fusing sample {sample:?}: {source}")]
    Fusion {
        sample: String,
        #[source]
        source: FusionError,
    },
}

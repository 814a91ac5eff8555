use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::types::{ModelId, ModelProfile};

/// How models are ordered when growing a top-N ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankingMode {
    Accuracy,
    Speed,
}

impl fmt::Display for RankingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Accuracy => "accuracy",
            Self::Speed => "speed",
        })
    }
}

impl FromStr for RankingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "accuracy" => Ok(Self::Accuracy),
            "speed" => Ok(Self::Speed),
            other => Err(format!("unknown ranking mode {other:?}")),
        }
    }
}

/// Checks ids are unique, ranks form a permutation of `1..=K` and latencies
/// are positive.
pub fn validate_profiles(profiles: &[ModelProfile]) -> Result<(), EvalError> {
    if profiles.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let count = profiles.len();
    let mut ids = HashSet::new();
    let mut ranks = HashSet::new();
    for p in profiles {
        if !ids.insert(&p.id) {
            return Err(EvalError::DuplicateModel {
                model: p.id.to_string(),
            });
        }
        if p.accuracy_rank == 0 || p.accuracy_rank as usize > count {
            return Err(EvalError::RankOutOfRange {
                rank: p.accuracy_rank,
                count,
            });
        }
        if !ranks.insert(p.accuracy_rank) {
            return Err(EvalError::DuplicateRank {
                rank: p.accuracy_rank,
            });
        }
        if !(p.latency_ms.is_finite() && p.latency_ms > 0.0) {
            return Err(EvalError::InvalidLatency {
                model: p.id.to_string(),
                value: p.latency_ms,
            });
        }
    }
    Ok(())
}

/// Profiles sorted best-first: by accuracy rank, or by latency with ties
/// broken by id.
pub fn order_profiles(
    profiles: &[ModelProfile],
    mode: RankingMode,
) -> Result<Vec<ModelProfile>, EvalError> {
    validate_profiles(profiles)?;
    let mut sorted = profiles.to_vec();
    match mode {
        RankingMode::Accuracy => sorted.sort_by_key(|p| p.accuracy_rank),
        RankingMode::Speed => sorted.sort_by(|a, b| {
            a.latency_ms
                .total_cmp(&b.latency_ms)
                .then_with(|| a.id.cmp(&b.id))
        }),
    }
    Ok(sorted)
}

pub fn rank_models(profiles: &[ModelProfile], mode: RankingMode) -> Result<Vec<ModelId>, EvalError> {
    Ok(order_profiles(profiles, mode)?
        .into_iter()
        .map(|p| p.id)
        .collect())
}

/// Summed per-image time of an ensemble and the resulting throughput.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyFps {
    pub latency_ms: f64,
    pub fps: f64,
}

impl LatencyFps {
    pub fn from_latency(latency_ms: f64) -> Self {
        Self {
            latency_ms,
            fps: 1000.0 / latency_ms,
        }
    }
}

/// Members run one after another, so the ensemble's time is the sum of the
/// first `n` members' times.
pub fn ensemble_latency(profiles: &[ModelProfile], n: usize) -> Result<LatencyFps, EvalError> {
    if n == 0 || n > profiles.len() {
        return Err(EvalError::NOutOfRange {
            n,
            len: profiles.len(),
        });
    }
    let total: f64 = profiles[..n].iter().map(|p| p.latency_ms).sum();
    Ok(LatencyFps::from_latency(total))
}

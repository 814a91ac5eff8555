use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ranking::{ensemble_latency, RankingMode};
use super::scoring::{macro_average, recognition_rate};
use super::EvalError;
use crate::fusion::FusionStrategy;
use crate::text::Text;
use crate::types::{Ensemble, ModelId, ModelProfile, Ranking, Sample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRate {
    pub strategy: FusionStrategy,
    /// Macro-averaged recognition rate in `[0, 1]`.
    pub rate: f64,
}

/// One top-N ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub added_model: ModelId,
    pub per_strategy_rate: Vec<StrategyRate>,
    pub cumulative_latency_ms: f64,
    pub fps: f64,
}

impl SweepRow {
    pub fn rate(&self, strategy: FusionStrategy) -> Option<f64> {
        self.per_strategy_rate
            .iter()
            .find(|r| r.strategy == strategy)
            .map(|r| r.rate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub ranking_mode: RankingMode,
    pub strategies: Vec<FusionStrategy>,
    pub rows: Vec<SweepRow>,
}

/// Fuses the first `n` models of `ordered` for every `n`, scoring each
/// strategy by its macro-averaged recognition rate.
///
/// `ordered` must already be sorted for `mode` (see
/// [`order_profiles`](super::order_profiles)). `tie_ranking` is the ranking
/// used by best-model tie-breaks and to order exact confidence ties; it
/// normally reflects accuracy even when the ensemble grows by speed.
pub fn sweep_top_n(
    samples: &[Sample],
    ordered: &[ModelProfile],
    mode: RankingMode,
    strategies: &[FusionStrategy],
    tie_ranking: &Ranking,
) -> Result<SweepReport, EvalError> {
    if strategies.is_empty() {
        return Err(EvalError::NoStrategies);
    }
    if ordered.is_empty() || samples.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    for s in samples {
        if s.ground_truth.is_none() {
            return Err(EvalError::MissingGroundTruth {
                sample: s.sample_id.clone(),
            });
        }
        if let Some(p) = ordered.iter().find(|p| !s.predictions.contains_key(&p.id)) {
            return Err(EvalError::MissingModelPrediction {
                sample: s.sample_id.clone(),
                model: p.id.to_string(),
            });
        }
    }

    let mut rows = Vec::with_capacity(ordered.len());
    for n in 1..=ordered.len() {
        let members: Vec<&ModelId> = ordered[..n].iter().map(|p| &p.id).collect();
        let ensembles: Vec<Ensemble> = samples
            .iter()
            .map(|s| {
                members
                    .iter()
                    .map(|m| ((*m).clone(), s.predictions[*m].clone()))
                    .collect()
            })
            .collect();

        let mut per_strategy_rate = Vec::with_capacity(strategies.len());
        for &strategy in strategies {
            let mut fused: HashMap<String, Text> = HashMap::with_capacity(samples.len());
            for (s, ens) in samples.iter().zip(&ensembles) {
                let r = strategy
                    .fuse(ens, Some(tie_ranking))
                    .map_err(|source| EvalError::Fusion {
                        sample: s.sample_id.clone(),
                        source,
                    })?;
                fused.insert(s.sample_id.clone(), r.text);
            }
            let rate = macro_average(&recognition_rate(samples, &fused)?)?;
            per_strategy_rate.push(StrategyRate { strategy, rate });
        }

        let timing = ensemble_latency(ordered, n)?;
        rows.push(SweepRow {
            n,
            added_model: ordered[n - 1].id.clone(),
            per_strategy_rate,
            cumulative_latency_ms: timing.latency_ms,
            fps: timing.fps,
        });
    }

    Ok(SweepReport {
        ranking_mode: mode,
        strategies: strategies.to_vec(),
        rows,
    })
}

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::fusion::{FusionResult, FusionStrategy};
use crate::text::Text;
use crate::types::{Ranking, Sample};

/// A plate counts as recognized only when every character matches.
pub fn is_correct(fused: &Text, ground_truth: Option<&Text>) -> Result<bool, EvalError> {
    match ground_truth {
        Some(gt) => Ok(fused == gt),
        None => Err(EvalError::MissingGroundTruth {
            sample: String::new(),
        }),
    }
}

/// Correct/total counts of one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub dataset: String,
    pub total: usize,
    pub correct: usize,
    pub rate: f64,
}

impl DatasetReport {
    pub fn new(dataset: impl Into<String>, total: usize, correct: usize) -> Self {
        assert!(total > 0 && correct <= total, "invalid counts {correct}/{total}");
        Self {
            dataset: dataset.into(),
            total,
            correct,
            rate: correct as f64 / total as f64,
        }
    }
}

/// Per-dataset recognition rates, in order of each dataset's first sample.
pub fn recognition_rate(
    samples: &[Sample],
    fused: &HashMap<String, Text>,
) -> Result<Vec<DatasetReport>, EvalError> {
    let mut order: Vec<&str> = Vec::new();
    let mut counts: HashMap<&str, (usize, usize)> = HashMap::new();
    for s in samples {
        let text = fused
            .get(&s.sample_id)
            .ok_or_else(|| EvalError::UncoveredSample {
                sample: s.sample_id.clone(),
            })?;
        let ok = is_correct(text, s.ground_truth.as_ref()).map_err(|_| {
            EvalError::MissingGroundTruth {
                sample: s.sample_id.clone(),
            }
        })?;
        let entry = counts.entry(s.dataset.as_str()).or_insert_with(|| {
            order.push(s.dataset.as_str());
            (0, 0)
        });
        entry.0 += 1;
        entry.1 += usize::from(ok);
    }
    Ok(order
        .into_iter()
        .map(|d| {
            let (total, correct) = counts[d];
            DatasetReport::new(d, total, correct)
        })
        .collect())
}

/// Unweighted mean of the per-dataset rates.
pub fn macro_average(reports: &[DatasetReport]) -> Result<f64, EvalError> {
    mean_rate(reports.iter().map(|r| r.rate))
}

/// Unweighted mean of raw rates.
pub fn mean_rate(rates: impl IntoIterator<Item = f64>) -> Result<f64, EvalError> {
    let (sum, n) = rates
        .into_iter()
        .fold((0.0, 0usize), |(s, n), r| (s + r, n + 1));
    if n == 0 {
        return Err(EvalError::EmptyInput);
    }
    Ok(sum / n as f64)
}

/// Fuses every sample of a corpus with one strategy.
pub fn fuse_corpus(
    samples: &[Sample],
    strategy: FusionStrategy,
    ranking: Option<&Ranking>,
) -> Result<Vec<FusionResult>, EvalError> {
    samples
        .iter()
        .map(|s| {
            strategy
                .fuse(&s.predictions, ranking)
                .map_err(|source| EvalError::Fusion {
                    sample: s.sample_id.clone(),
                    source,
                })
        })
        .collect()
}

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::text::Text;

/// Identifier of a recognition model within an ensemble.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ModelId(String);

impl ModelId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(FusionError::EmptyModelId);
        }
        Ok(Self(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ModelId {
    type Error = FusionError;

    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ModelId> for String {
    fn from(id: ModelId) -> Self {
        id.0
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Checks that `value` is a finite confidence in `[0, 1]`.
pub fn check_confidence(value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(FusionError::InvalidConfidence { value })
    }
}

/// One model's output for one plate: a normalized text plus a single
/// sequence-level confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    text: Text,
    confidence: f64,
}

impl Prediction {
    pub fn new(text: Text, confidence: f64) -> Result<Self> {
        Ok(Self {
            text,
            confidence: check_confidence(confidence)?,
        })
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }

    /// Same text, new confidence. Used by confidence normalization.
    pub fn with_confidence(&self, confidence: f64) -> Result<Self> {
        Self::new(self.text.clone(), confidence)
    }
}

/// Predictions of an ensemble for one sample, keyed by model.
pub type Ensemble = BTreeMap<ModelId, Prediction>;

/// A single test instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub sample_id: String,
    pub dataset: String,
    pub ground_truth: Option<Text>,
    pub predictions: Ensemble,
}

impl Sample {
    pub fn new(
        sample_id: impl Into<String>,
        dataset: impl Into<String>,
        ground_truth: Option<Text>,
        predictions: Ensemble,
    ) -> Result<Self> {
        let sample_id = sample_id.into();
        let dataset = dataset.into();
        if sample_id.is_empty() {
            return Err(FusionError::InvalidSample("empty sample id".into()));
        }
        if dataset.is_empty() {
            return Err(FusionError::InvalidSample(format!(
                "sample {sample_id:?} has an empty dataset tag"
            )));
        }
        if predictions.is_empty() {
            return Err(FusionError::InvalidSample(format!(
                "sample {sample_id:?} has no predictions"
            )));
        }
        Ok(Self {
            sample_id,
            dataset,
            ground_truth,
            predictions,
        })
    }

    /// Copy of this sample keeping only the predictions of `models`.
    pub fn restricted_to<'a>(&self, models: impl IntoIterator<Item = &'a ModelId>) -> Sample {
        let predictions = models
            .into_iter()
            .filter_map(|m| self.predictions.get(m).map(|p| (m.clone(), p.clone())))
            .collect();
        Sample {
            sample_id: self.sample_id.clone(),
            dataset: self.dataset.clone(),
            ground_truth: self.ground_truth.clone(),
            predictions,
        }
    }
}

/// Identity, accuracy position and per-image latency of one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelProfile {
    pub id: ModelId,
    /// 1 is the most accurate model.
    pub accuracy_rank: u32,
    /// Mean milliseconds per image.
    pub latency_ms: f64,
}

/// A total order over models, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<ModelId>,
    position: HashMap<ModelId, usize>,
}

impl Ranking {
    pub fn new(order: Vec<ModelId>) -> Result<Self> {
        let mut position = HashMap::with_capacity(order.len());
        for (i, id) in order.iter().enumerate() {
            if position.insert(id.clone(), i).is_some() {
                return Err(FusionError::DuplicateInRanking {
                    model: id.to_string(),
                });
            }
        }
        Ok(Self { order, position })
    }

    pub fn position(&self, id: &ModelId) -> Option<usize> {
        self.position.get(id).copied()
    }

    pub fn models(&self) -> &[ModelId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Fails unless every model in `ensemble` has a position.
    pub fn check_covers(&self, ensemble: &Ensemble) -> Result<()> {
        match ensemble.keys().find(|m| !self.position.contains_key(*m)) {
            Some(m) => Err(FusionError::RankingMissingModel {
                model: m.to_string(),
            }),
            None => Ok(()),
        }
    }
}

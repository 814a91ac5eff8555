//! Per-model confidence rescaling applied before fusion.
//!
//! Off by default: rescaling by each model's average confidence was not found
//! to help, but the option is kept for ablations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::types::{ModelId, Sample};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationMode {
    #[default]
    Off,
    /// Divide each model's confidences by that model's corpus-wide mean,
    /// then clamp to `[0, 1]`.
    PerModelMeanScaling,
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Off => "off",
            Self::PerModelMeanScaling => "mean-scaling",
        })
    }
}

impl FromStr for NormalizationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(Self::Off),
            "mean-scaling" | "per-model-mean-scaling" => Ok(Self::PerModelMeanScaling),
            other => Err(format!("unknown normalization mode {other:?}")),
        }
    }
}

/// Mean confidence of every model over the whole corpus.
pub fn model_mean_confidences(samples: &[Sample]) -> BTreeMap<ModelId, f64> {
    let mut sums: BTreeMap<ModelId, (f64, usize)> = BTreeMap::new();
    for s in samples {
        for (m, p) in &s.predictions {
            let e = sums.entry(m.clone()).or_default();
            e.0 += p.confidence();
            e.1 += 1;
        }
    }
    sums.into_iter()
        .map(|(m, (sum, n))| (m, sum / n as f64))
        .collect()
}

pub fn normalize_confidences(samples: &[Sample], mode: NormalizationMode) -> Vec<Sample> {
    match mode {
        NormalizationMode::Off => samples.to_vec(),
        NormalizationMode::PerModelMeanScaling => {
            let means = model_mean_confidences(samples);
            samples
                .iter()
                .map(|s| {
                    let mut out = s.clone();
                    for (m, p) in out.predictions.iter_mut() {
                        let mean = means[m];
                        // An all-zero model has nothing to rescale.
                        if mean > 0.0 {
                            let scaled = (p.confidence() / mean).clamp(0.0, 1.0);
                            *p = p.with_confidence(scaled).expect("clamped into range");
                        }
                    }
                    out
                })
                .collect()
        }
    }
}

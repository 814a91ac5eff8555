//! Shared inputs for the criterion benchmarks.

use lprfuse_core::synth::{generate, ErrorModel, SynthConfig};
use lprfuse_core::{ModelProfile, Ranking, Sample};

/// A seeded corpus of seven-character plates read by `n_models` models.
pub fn corpus(n_models: usize, n_samples: usize, sub_rate: f64) -> (Vec<Sample>, Ranking) {
    let model = ErrorModel {
        insertion_rate: 0.02,
        deletion_rate: 0.02,
        ..ErrorModel::with_substitution(sub_rate)
    };
    let config = SynthConfig::uniform(7, n_models, n_samples, 7, model);
    let samples = generate(&config).expect("valid config");
    let ranking = Ranking::new(config.model_ids()).expect("distinct ids");
    (samples, ranking)
}

/// Profiles in ranking order with a nominal latency per model.
pub fn profiles(ranking: &Ranking) -> Vec<ModelProfile> {
    ranking
        .models()
        .iter()
        .enumerate()
        .map(|(i, id)| ModelProfile {
            id: id.clone(),
            accuracy_rank: i as u32 + 1,
            latency_ms: 2.0 + i as f64,
        })
        .collect()
}

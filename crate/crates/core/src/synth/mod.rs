//! Seeded synthetic ensembles.
//!
//! Each sample gets a uniform random ground-truth plate; every simulated model
//! then corrupts it independently per character, optionally inserts and/or
//! deletes one character, and reports a confidence drawn from a "correct" or
//! "wrong" distribution depending on whether its final text is right.
//!
//! # Random source
//!
//! Sample `i` is generated from its own `ChaCha8` stream:
//! `ChaCha8Rng::seed_from_u64(seed)` followed by `set_stream(i)`. All draws are
//! uniform doubles `u = (next_u64() >> 11) * 2^-53`; an index into `n` items is
//! `min(floor(u * n), n - 1)`. Per sample the draws are, in order:
//!
//! 1. one symbol index per ground-truth position;
//! 2. for each model in order: per position, a substitution draw and a
//!    replacement-symbol draw (index into the alphabet minus the true symbol);
//!    then an insertion draw, an insertion position in `0..=len` and an
//!    inserted symbol; then a deletion draw and a deletion position; then a
//!    confidence draw.
//!
//! Every draw is consumed whether or not the event fires, so changing one rate
//! leaves all other random decisions of the corpus unchanged.
//!
//! The confidence distributions in [`ErrorModel::default`] are our own choice;
//! nothing in the underlying experiments pins them down.

pub mod oracle;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{Alphabet, Text, DEFAULT_SYMBOLS};
use crate::types::{Ensemble, ModelId, Prediction, Sample};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("invalid synthetic config: {0}")]
    InvalidConfig(String),
}

/// Confidence drawn uniformly from `[mean - spread, mean + spread]`, clamped
/// to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfidenceDist {
    pub mean: f64,
    pub spread: f64,
}

impl ConfidenceDist {
    pub const fn new(mean: f64, spread: f64) -> Self {
        Self { mean, spread }
    }

    fn sample(&self, u: f64) -> f64 {
        (self.mean + self.spread * (2.0 * u - 1.0)).clamp(0.0, 1.0)
    }
}

/// Noise model of one simulated recognizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorModel {
    pub per_char_sub_rate: f64,
    pub insertion_rate: f64,
    pub deletion_rate: f64,
    pub confidence_when_correct: ConfidenceDist,
    pub confidence_when_wrong: ConfidenceDist,
    /// Wrong predictions draw from `confidence_when_correct` too.
    pub overconfident: bool,
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self {
            per_char_sub_rate: 0.05,
            insertion_rate: 0.0,
            deletion_rate: 0.0,
            confidence_when_correct: ConfidenceDist::new(0.9, 0.08),
            confidence_when_wrong: ConfidenceDist::new(0.6, 0.2),
            overconfident: false,
        }
    }
}

impl ErrorModel {
    pub fn with_substitution(per_char_sub_rate: f64) -> Self {
        Self {
            per_char_sub_rate,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |what: &str, v: f64| Err(SynthError::InvalidConfig(format!("{what} = {v}")));
        if !(0.0..0.5).contains(&self.per_char_sub_rate) {
            return bad("per_char_sub_rate must be in [0, 0.5)", self.per_char_sub_rate);
        }
        if !(0.0..=0.2).contains(&self.insertion_rate) {
            return bad("insertion_rate must be in [0, 0.2]", self.insertion_rate);
        }
        if !(0.0..=0.2).contains(&self.deletion_rate) {
            return bad("deletion_rate must be in [0, 0.2]", self.deletion_rate);
        }
        for d in [self.confidence_when_correct, self.confidence_when_wrong] {
            if !(d.mean > 0.0 && d.mean <= 1.0) {
                return bad("confidence mean must be in (0, 1]", d.mean);
            }
            if !(0.0..=1.0).contains(&d.spread) {
                return bad("confidence spread must be in [0, 1]", d.spread);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_models: usize,
    pub n_samples: usize,
    pub plate_length: usize,
    #[serde(default = "default_alphabet")]
    pub alphabet: String,
    #[serde(default = "default_dataset")]
    pub dataset: String,
    pub per_model: Vec<ErrorModel>,
}

fn default_alphabet() -> String {
    DEFAULT_SYMBOLS.to_string()
}

fn default_dataset() -> String {
    "synthetic".to_string()
}

impl SynthConfig {
    /// `n_models` identical models over the default alphabet.
    pub fn uniform(
        seed: u64,
        n_models: usize,
        n_samples: usize,
        plate_length: usize,
        model: ErrorModel,
    ) -> Self {
        Self {
            seed,
            n_models,
            n_samples,
            plate_length,
            alphabet: default_alphabet(),
            dataset: default_dataset(),
            per_model: vec![model; n_models],
        }
    }

    pub fn validate(&self) -> Result<Alphabet, SynthError> {
        let invalid = |m: String| Err(SynthError::InvalidConfig(m));
        if self.n_models == 0 {
            return invalid("n_models must be at least 1".into());
        }
        if self.n_samples == 0 {
            return invalid("n_samples must be at least 1".into());
        }
        if self.plate_length == 0 {
            return invalid("plate_length must be at least 1".into());
        }
        if self.dataset.is_empty() {
            return invalid("dataset must be non-empty".into());
        }
        if self.per_model.len() != self.n_models {
            return invalid(format!(
                "per_model has {} entries but n_models is {}",
                self.per_model.len(),
                self.n_models
            ));
        }
        for m in &self.per_model {
            m.validate()?;
        }
        let alphabet = Alphabet::new(&self.alphabet)
            .map_err(|e| SynthError::InvalidConfig(format!("alphabet: {e}")))?;
        if alphabet.len() < 2 {
            return invalid("alphabet needs at least two symbols".into());
        }
        Ok(alphabet)
    }

    /// Model ids `m1`..`mK`, zero-padded so that lexical and numeric order
    /// agree.
    pub fn model_ids(&self) -> Vec<ModelId> {
        let width = self.n_models.to_string().len();
        (1..=self.n_models)
            .map(|i| ModelId::new(format!("m{i:0width$}")).expect("non-empty"))
            .collect()
    }
}

struct Draws(ChaCha8Rng);

impl Draws {
    fn for_sample(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self(rng)
    }

    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn index(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }
}

/// Generates the corpus described by `config`.
pub fn generate(config: &SynthConfig) -> Result<Vec<Sample>, SynthError> {
    let alphabet = config.validate()?;
    let ids = config.model_ids();
    Ok((0..config.n_samples)
        .map(|i| generate_sample(config, &alphabet, &ids, i))
        .collect())
}

/// Generates sample `index` alone; `generate` is equivalent to calling this
/// for every index, so corpora can be produced in parallel or in pieces.
pub fn generate_sample_at(config: &SynthConfig, index: usize) -> Result<Sample, SynthError> {
    let alphabet = config.validate()?;
    if index >= config.n_samples {
        return Err(SynthError::InvalidConfig(format!(
            "sample index {index} out of range"
        )));
    }
    Ok(generate_sample(config, &alphabet, &config.model_ids(), index))
}

fn generate_sample(
    config: &SynthConfig,
    alphabet: &Alphabet,
    ids: &[ModelId],
    index: usize,
) -> Sample {
    let symbols = alphabet.symbols();
    let a = symbols.len();
    let mut rng = Draws::for_sample(config.seed, index as u64);

    let truth_idx: Vec<usize> = (0..config.plate_length).map(|_| rng.index(a)).collect();
    let truth: Vec<char> = truth_idx.iter().map(|&k| symbols[k]).collect();

    let mut predictions = Ensemble::new();
    for (id, model) in ids.iter().zip(&config.per_model) {
        let mut chars = truth.clone();
        for (pos, &true_k) in truth_idx.iter().enumerate() {
            let hit = rng.unit() < model.per_char_sub_rate;
            let k = rng.index(a - 1);
            if hit {
                chars[pos] = symbols[if k < true_k { k } else { k + 1 }];
            }
        }

        let hit = rng.unit() < model.insertion_rate;
        let pos = rng.index(chars.len() + 1);
        let sym = symbols[rng.index(a)];
        if hit {
            chars.insert(pos, sym);
        }

        let hit = rng.unit() < model.deletion_rate;
        let pos = rng.index(chars.len());
        if hit && chars.len() > 1 {
            chars.remove(pos);
        }

        let dist = if chars == truth || model.overconfident {
            model.confidence_when_correct
        } else {
            model.confidence_when_wrong
        };
        let confidence = dist.sample(rng.unit());

        let text = Text::from_normalized(chars.into_iter().collect());
        predictions.insert(
            id.clone(),
            Prediction::new(text, confidence).expect("clamped confidence"),
        );
    }

    Sample {
        sample_id: format!("{}-{:06}", config.dataset, index),
        dataset: config.dataset.clone(),
        ground_truth: Some(Text::from_normalized(truth.into_iter().collect())),
        predictions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::FusionStrategy;
    use crate::types::Ranking;

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = SynthConfig::uniform(42, 3, 5, 7, ErrorModel::with_substitution(0.2));
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        let other = generate(&SynthConfig { seed: 43, ..cfg.clone() }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn samples_are_independent_streams() {
        let cfg = SynthConfig::uniform(7, 4, 20, 6, ErrorModel::with_substitution(0.3));
        let all = generate(&cfg).unwrap();
        for i in [0, 5, 19] {
            assert_eq!(generate_sample_at(&cfg, i).unwrap(), all[i]);
        }
        assert!(generate_sample_at(&cfg, 20).is_err());
    }

    #[test]
    fn zero_noise_is_perfect() {
        let cfg = SynthConfig::uniform(1, 5, 50, 7, ErrorModel::with_substitution(0.0));
        let corpus = generate(&cfg).unwrap();
        let ranking = Ranking::new(cfg.model_ids()).unwrap();
        for s in &corpus {
            let gt = s.ground_truth.as_ref().unwrap();
            assert_eq!(gt.len(), 7);
            assert!(s.predictions.values().all(|p| p.text() == gt));
            for st in FusionStrategy::ALL {
                assert_eq!(&st.fuse(&s.predictions, Some(&ranking)).unwrap().text, gt);
            }
        }
    }

    #[test]
    fn substitution_rate_is_respected() {
        let cfg = SynthConfig::uniform(3, 1, 4000, 5, ErrorModel::with_substitution(0.2));
        let corpus = generate(&cfg).unwrap();
        let (mut wrong, mut total) = (0usize, 0usize);
        for s in &corpus {
            let gt: Vec<char> = s.ground_truth.as_ref().unwrap().chars().collect();
            let p: Vec<char> = s.predictions.values().next().unwrap().text().chars().collect();
            wrong += gt.iter().zip(&p).filter(|(a, b)| a != b).count();
            total += gt.len();
        }
        let rate = wrong as f64 / total as f64;
        assert!((rate - 0.2).abs() < 0.015, "observed {rate}");
    }

    #[test]
    fn length_errors_change_length_by_at_most_one_each() {
        let model = ErrorModel {
            insertion_rate: 0.2,
            deletion_rate: 0.2,
            ..ErrorModel::with_substitution(0.0)
        };
        let corpus = generate(&SynthConfig::uniform(9, 3, 500, 7, model)).unwrap();
        let mut lengths = std::collections::BTreeSet::new();
        for s in &corpus {
            for p in s.predictions.values() {
                lengths.insert(p.text().len());
            }
        }
        assert_eq!(lengths, [6, 7, 8].into());
    }

    #[test]
    fn rate_change_keeps_other_draws() {
        let base = SynthConfig::uniform(11, 3, 50, 7, ErrorModel::with_substitution(0.2));
        let mut noisy = base.clone();
        for m in &mut noisy.per_model {
            m.insertion_rate = 0.2;
        }
        let a = generate(&base).unwrap();
        let b = generate(&noisy).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.ground_truth, y.ground_truth);
        }
    }

    #[test]
    fn overconfident_wrong_reads() {
        let model = ErrorModel {
            overconfident: true,
            confidence_when_correct: ConfidenceDist::new(0.95, 0.0),
            confidence_when_wrong: ConfidenceDist::new(0.1, 0.0),
            ..ErrorModel::with_substitution(0.3)
        };
        let corpus = generate(&SynthConfig::uniform(5, 2, 30, 7, model)).unwrap();
        assert!(corpus
            .iter()
            .flat_map(|s| s.predictions.values())
            .all(|p| p.confidence() == 0.95));
    }

    #[test]
    fn config_validation() {
        let ok = SynthConfig::uniform(0, 2, 1, 1, ErrorModel::default());
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.per_model.pop();
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.per_model[0].per_char_sub_rate = 0.5;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.per_model[1].insertion_rate = 0.25;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.per_model[1].confidence_when_wrong.mean = 0.0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.alphabet = "A".into();
        assert!(c.validate().is_err());
        let mut c = ok;
        c.n_samples = 0;
        assert!(matches!(generate(&c), Err(SynthError::InvalidConfig(_))));
    }

    #[test]
    fn model_ids_sort_numerically() {
        let cfg = SynthConfig::uniform(0, 12, 1, 1, ErrorModel::default());
        let ids = cfg.model_ids();
        assert_eq!(ids[0].as_str(), "m01");
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(sorted, ids);
    }
}

use std::path::Path;

use serde::Deserialize;

use super::{read_file, LoadError};
use crate::synth::{ErrorModel, SynthConfig};
use crate::text::DEFAULT_SYMBOLS;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SynthConfigFile {
    seed: u64,
    n_models: usize,
    n_samples: usize,
    plate_length: usize,
    alphabet: Option<String>,
    dataset: Option<String>,
    /// Used for every model when `per_model` is absent.
    model_defaults: Option<ErrorModel>,
    per_model: Option<Vec<ErrorModel>>,
}

pub fn load_synth_config(path: &Path) -> Result<SynthConfig, LoadError> {
    parse_synth_config(&read_file(path)?)
}

/// Parses a TOML synthetic-corpus config.
///
/// ```toml
/// seed = 42
/// n_models = 7
/// n_samples = 1000
/// plate_length = 7
///
/// [model_defaults]
/// per_char_sub_rate = 0.2
/// ```
///
/// Per-model settings go in `[[per_model]]` tables, one per model.
pub fn parse_synth_config(input: &str) -> Result<SynthConfig, LoadError> {
    let file: SynthConfigFile = toml::from_str(input).map_err(|e| {
        let line = e
            .span()
            .map(|s| input[..s.start].matches('\n').count() + 1)
            .unwrap_or(0);
        LoadError::parse(line, e.message().to_string())
    })?;
    let per_model = match file.per_model {
        Some(list) => list,
        None => vec![file.model_defaults.unwrap_or_default(); file.n_models],
    };
    let config = SynthConfig {
        seed: file.seed,
        n_models: file.n_models,
        n_samples: file.n_samples,
        plate_length: file.plate_length,
        alphabet: file.alphabet.unwrap_or_else(|| DEFAULT_SYMBOLS.to_string()),
        dataset: file.dataset.unwrap_or_else(|| "synthetic".to_string()),
        per_model,
    };
    config.validate()?;
    Ok(config)
}

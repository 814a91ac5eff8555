use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, LoadError};
use crate::eval::validate_profiles;
use crate::types::ModelProfile;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    #[serde(default, rename = "model")]
    models: Vec<ModelProfile>,
}

/// Loads a TOML profile list:
///
/// ```toml
/// [[model]]
/// id = "ViTSTR-Base"
/// accuracy_rank = 1
/// latency_ms = 7.3
/// ```
pub fn load_profiles(path: &Path) -> Result<Vec<ModelProfile>, LoadError> {
    parse_profiles(&read_file(path)?)
}

pub fn parse_profiles(input: &str) -> Result<Vec<ModelProfile>, LoadError> {
    let file: ProfileFile = toml::from_str(input).map_err(|e| {
        let line = e
            .span()
            .map(|s| input[..s.start].matches('\n').count() + 1)
            .unwrap_or(0);
        LoadError::parse(line, e.message().to_string())
    })?;
    if file.models.is_empty() {
        return Err(LoadError::EmptyFile);
    }
    validate_profiles(&file.models)?;
    Ok(file.models)
}

pub fn write_profiles(profiles: &[ModelProfile]) -> String {
    toml::to_string(&ProfileFile {
        models: profiles.to_vec(),
    })
    .expect("profiles serialize")
}

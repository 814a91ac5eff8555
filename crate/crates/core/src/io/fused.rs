use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, LoadError, LoadOptions};
use crate::fusion::{FusionResult, FusionStrategy};
use crate::text::normalize_text;
use crate::types::Sample;

/// One fused prediction with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusedRecord {
    pub sample_id: String,
    pub dataset: String,
    pub strategy: FusionStrategy,
    pub text: String,
    pub winning_votes: usize,
    pub tie_broken: bool,
    pub contributors: Vec<String>,
}

impl FusedRecord {
    pub fn new(sample: &Sample, strategy: FusionStrategy, result: &FusionResult) -> Self {
        Self {
            sample_id: sample.sample_id.clone(),
            dataset: sample.dataset.clone(),
            strategy,
            text: result.text.to_string(),
            winning_votes: result.winning_votes,
            tie_broken: result.tie_broken,
            contributors: result.contributors.iter().map(|m| m.to_string()).collect(),
        }
    }
}

pub fn write_fused<W: Write>(records: &[FusedRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn load_fused(path: &Path, opts: &LoadOptions) -> Result<Vec<FusedRecord>, LoadError> {
    parse_fused(&read_file(path)?, opts)
}

/// Parses fused records; texts are re-normalized against the alphabet.
pub fn parse_fused(input: &str, opts: &LoadOptions) -> Result<Vec<FusedRecord>, LoadError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut rec: FusedRecord =
            serde_json::from_str(raw).map_err(|e| LoadError::parse(line, e.to_string()))?;
        rec.text = normalize_text(&rec.text, &opts.alphabet)
            .map_err(|source| LoadError::InvalidText {
                line,
                field: "text".into(),
                source,
            })?
            .to_string();
        if !seen.insert(rec.sample_id.clone()) {
            return Err(LoadError::DuplicateSample {
                line,
                sample: rec.sample_id,
            });
        }
        out.push(rec);
    }
    if out.is_empty() {
        return Err(LoadError::EmptyFile);
    }
    Ok(out)
}

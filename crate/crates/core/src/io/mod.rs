//! File formats.
//!
//! * Prediction files are JSON Lines: one sample per line.
//! * Fused-output files are JSON Lines: one fused record per line.
//! * Model profiles and synthetic configs are TOML.
//! * Reports are JSON documents, rendered to comma-delimited text or an
//!   aligned plain-text table.

mod config;
mod fused;
mod predictions;
mod profiles;
mod report;

use std::path::PathBuf;

use thiserror::Error;

use crate::error::FusionError;
use crate::eval::EvalError;
use crate::synth::SynthError;
use crate::text::Alphabet;

pub use config::{load_synth_config, parse_synth_config};
pub use fused::{load_fused, parse_fused, write_fused, FusedRecord};
pub use predictions::{load_predictions, parse_predictions, write_predictions};
pub use profiles::{load_profiles, parse_profiles, write_profiles};
pub use report::{
    format_fps, format_latency, format_percent, load_report, render_report, round_half_up,
    write_report, ApproachRow, DatasetTable, RenderFormat, ReportDoc,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: model {model:?} has invalid confidence {value}")]
    InvalidConfidence {
        line: usize,
        model: String,
        value: f64,
    },
    #[error("line {line}: {field}: {source}")]
    InvalidText {
        line: usize,
        field: String,
        #[source]
        source: FusionError,
    },
    #[error("line {line}: duplicate sample id {sample:?}")]
    DuplicateSample { line: usize, sample: String },
    #[error("file contains no records")]
    EmptyFile,
    #[error(transparent)]
    Profiles(#[from] EvalError),
    #[error(transparent)]
    Config(#[from] SynthError),
}

impl LoadError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Ingestion settings.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Reject unknown fields instead of warning about them.
    pub strict: bool,
    pub alphabet: Alphabet,
}

impl LoadOptions {
    pub fn strict() -> Self {
        Self {
            strict: true,
            alphabet: Alphabet::default(),
        }
    }

    pub fn lenient() -> Self {
        Self {
            strict: false,
            alphabet: Alphabet::default(),
        }
    }
}

/// Strict by default.
impl Default for LoadOptions {
    fn default() -> Self {
        Self::strict()
    }
}

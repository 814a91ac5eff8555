//! Multi-model fusion for license plate recognition.
//!
//! Several recognizers each emit a plate string with a confidence. The
//! [`fusion`] strategies combine those into one output: highest confidence,
//! sequence-level majority vote, or majority vote per character position,
//! with a confidence or best-model fallback for ties. [`eval`] scores fused
//! outputs and sweeps ensemble sizes, [`synth`] generates reproducible
//! synthetic ensembles and [`io`] reads and writes the file formats.

pub mod error;
pub mod eval;
pub mod fusion;
pub mod io;
pub mod normalize;
pub mod synth;
pub mod text;
pub mod types;

pub use error::{FusionError, Result};
pub use fusion::{FusionResult, FusionStrategy, StrategyKind, TieBreak, TieBreakKind};
pub use normalize::{normalize_confidences, NormalizationMode};
pub use text::{normalize_text, Alphabet, Text, DEFAULT_SYMBOLS};
pub use types::{check_confidence, Ensemble, ModelId, ModelProfile, Prediction, Ranking, Sample};

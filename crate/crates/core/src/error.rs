use thiserror::Error;

/// Errors raised while building domain values or fusing predictions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("text is empty after normalization")]
    EmptyAfterNormalization,
    #[error("symbol {symbol:?} is not in the alphabet")]
    SymbolOutsideAlphabet { symbol: char },
    #[error("confidence {value} is not a finite value in [0, 1]")]
    InvalidConfidence { value: f64 },
    #[error("model id must be non-empty")]
    EmptyModelId,
    #[error("cannot fuse an empty ensemble")]
    EmptyEnsemble,
    #[error("ranking lists model {model:?} more than once")]
    DuplicateInRanking { model: String },
    #[error("ranking does not cover model {model:?}")]
    RankingMissingModel { model: String },
    #[error("best-model tie-break requires a model ranking")]
    MissingRanking,
    #[error("unknown fusion strategy {name:?} (expected hc, mv-bm, mv-hc, mvcp-bm or mvcp-hc)")]
    UnknownStrategy { name: String },
    #[error("invalid sample: {0}")]
    InvalidSample(String),
}

pub type Result<T, E = FusionError> = std::result::Result<T, E>;

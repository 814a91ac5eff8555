//! Combining the predictions of several recognizers into one plate string.
//!
//! Three rules are provided:
//!
//! | Strategy | Selection unit | Uses confidence |
//! |----------|----------------|-----------------|
//! | [`hc_fuse`] | whole prediction | always |
//! | [`mv_fuse`] | whole sequence, by vote count | only to break ties (HC tie-break) |
//! | [`mvcp_fuse`] | each character position, by vote count | only to break ties (HC tie-break) |
//!
//! Vote ties are resolved with a [`TieBreak`]: either the highest-confidence
//! prediction among the tied candidates, or the candidate predicted by the
//! best-ranked model. Exact confidence ties fall back to the ranking when one
//! is supplied, and to model-id order otherwise, so every call is
//! deterministic.

mod hc;
mod mv;
mod mvcp;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::text::Text;
use crate::types::{Ensemble, ModelId, Prediction, Ranking};

pub use hc::hc_fuse;
pub use mv::mv_fuse;
pub use mvcp::mvcp_fuse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Hc,
    Mv,
    Mvcp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieBreakKind {
    HighestConfidence,
    BestModel,
}

/// Tie-break rule plus the ranking it may consult.
///
/// `ranking` is mandatory for [`TieBreakKind::BestModel`]; for
/// [`TieBreakKind::HighestConfidence`] it only orders exact confidence ties.
#[derive(Debug, Clone, Copy)]
pub struct TieBreak<'r> {
    pub kind: TieBreakKind,
    pub ranking: Option<&'r Ranking>,
}

impl<'r> TieBreak<'r> {
    pub fn highest_confidence(ranking: Option<&'r Ranking>) -> Self {
        Self {
            kind: TieBreakKind::HighestConfidence,
            ranking,
        }
    }

    pub fn best_model(ranking: &'r Ranking) -> Self {
        Self {
            kind: TieBreakKind::BestModel,
            ranking: Some(ranking),
        }
    }

    fn validate(&self, ensemble: &Ensemble) -> Result<()> {
        match (self.kind, self.ranking) {
            (TieBreakKind::BestModel, None) => Err(FusionError::MissingRanking),
            (_, Some(r)) => r.check_covers(ensemble),
            (_, None) => Ok(()),
        }
    }

    /// Picks one prediction out of `candidates` according to this rule.
    ///
    /// Returns `None` only when `candidates` is empty.
    fn select<'e>(
        &self,
        candidates: impl IntoIterator<Item = (&'e ModelId, &'e Prediction)>,
    ) -> Option<(&'e ModelId, &'e Prediction)> {
        candidates.into_iter().reduce(|best, cur| {
            if self.prefers(cur, best) {
                cur
            } else {
                best
            }
        })
    }

    /// True if `a` should win over `b`.
    fn prefers(&self, a: (&ModelId, &Prediction), b: (&ModelId, &Prediction)) -> bool {
        if self.kind == TieBreakKind::HighestConfidence {
            let (ca, cb) = (a.1.confidence(), b.1.confidence());
            if ca != cb {
                return ca > cb;
            }
        }
        self.ranked_before(a.0, b.0)
    }

    fn ranked_before(&self, a: &ModelId, b: &ModelId) -> bool {
        match self.ranking {
            Some(r) => {
                let pa = r.position(a).unwrap_or(usize::MAX);
                let pb = r.position(b).unwrap_or(usize::MAX);
                (pa, a) < (pb, b)
            }
            None => a < b,
        }
    }
}

/// One of the five fusion configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FusionStrategy {
    pub kind: StrategyKind,
    /// Ignored by [`StrategyKind::Hc`].
    pub tiebreak: TieBreakKind,
}

impl FusionStrategy {
    pub const HC: Self = Self {
        kind: StrategyKind::Hc,
        tiebreak: TieBreakKind::HighestConfidence,
    };
    pub const MV_BM: Self = Self {
        kind: StrategyKind::Mv,
        tiebreak: TieBreakKind::BestModel,
    };
    pub const MV_HC: Self = Self {
        kind: StrategyKind::Mv,
        tiebreak: TieBreakKind::HighestConfidence,
    };
    pub const MVCP_BM: Self = Self {
        kind: StrategyKind::Mvcp,
        tiebreak: TieBreakKind::BestModel,
    };
    pub const MVCP_HC: Self = Self {
        kind: StrategyKind::Mvcp,
        tiebreak: TieBreakKind::HighestConfidence,
    };

    /// All five strategies in the column order of the usual result tables.
    pub const ALL: [Self; 5] = [
        Self::HC,
        Self::MV_BM,
        Self::MV_HC,
        Self::MVCP_BM,
        Self::MVCP_HC,
    ];

    pub fn needs_ranking(&self) -> bool {
        self.kind != StrategyKind::Hc && self.tiebreak == TieBreakKind::BestModel
    }

    /// Display name, e.g. `MV-HC`.
    pub fn name(&self) -> &'static str {
        match (self.kind, self.tiebreak) {
            (StrategyKind::Hc, _) => "HC",
            (StrategyKind::Mv, TieBreakKind::BestModel) => "MV-BM",
            (StrategyKind::Mv, TieBreakKind::HighestConfidence) => "MV-HC",
            (StrategyKind::Mvcp, TieBreakKind::BestModel) => "MVCP-BM",
            (StrategyKind::Mvcp, TieBreakKind::HighestConfidence) => "MVCP-HC",
        }
    }

    /// Command-line spelling, e.g. `mv-hc`.
    pub fn flag(&self) -> String {
        self.name().to_ascii_lowercase()
    }

    /// Fuses one ensemble.
    ///
    /// `ranking` is required for best-model tie-breaks and otherwise only
    /// orders exact confidence ties.
    pub fn fuse(&self, ensemble: &Ensemble, ranking: Option<&Ranking>) -> Result<FusionResult> {
        match self.kind {
            StrategyKind::Hc => hc_fuse(ensemble, ranking),
            StrategyKind::Mv => mv_fuse(ensemble, self.tie_break(ranking)?),
            StrategyKind::Mvcp => mvcp_fuse(ensemble, self.tie_break(ranking)?),
        }
    }

    fn tie_break<'r>(&self, ranking: Option<&'r Ranking>) -> Result<TieBreak<'r>> {
        match self.tiebreak {
            TieBreakKind::HighestConfidence => Ok(TieBreak::highest_confidence(ranking)),
            TieBreakKind::BestModel => ranking
                .map(TieBreak::best_model)
                .ok_or(FusionError::MissingRanking),
        }
    }
}

impl fmt::Display for FusionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FusionStrategy {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|st| st.flag() == lower)
            .ok_or_else(|| FusionError::UnknownStrategy { name: s.into() })
    }
}

impl Serialize for FusionStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for FusionStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fused text plus provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionResult {
    pub text: Text,
    /// Votes behind the winner: sequence votes for MV, the weakest
    /// position's votes for MVCP, 0 for HC.
    pub winning_votes: usize,
    pub tie_broken: bool,
    /// MV and HC: models whose prediction equals `text`. MVCP: models that
    /// supplied at least one winning character.
    pub contributors: BTreeSet<ModelId>,
}

fn ensure_non_empty(ensemble: &Ensemble) -> Result<()> {
    if ensemble.is_empty() {
        Err(FusionError::EmptyEnsemble)
    } else {
        Ok(())
    }
}

fn models_predicting(ensemble: &Ensemble, text: &Text) -> BTreeSet<ModelId> {
    ensemble
        .iter()
        .filter(|(_, p)| p.text() == text)
        .map(|(m, _)| m.clone())
        .collect()
}

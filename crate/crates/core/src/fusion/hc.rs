use std::collections::BTreeSet;

use super::{ensure_non_empty, models_predicting, FusionResult, TieBreak};
use crate::error::Result;
use crate::types::{Ensemble, Ranking};

/// Returns the prediction with the highest confidence, even if only one model
/// produced it.
///
/// Exact confidence ties go to the model ranked first in `ranking`, or to the
/// smallest model id when no ranking is given. `tie_broken` is set when the
/// tied predictions disagree on the text.
pub fn hc_fuse(ensemble: &Ensemble, ranking: Option<&Ranking>) -> Result<FusionResult> {
    ensure_non_empty(ensemble)?;
    let rule = TieBreak::highest_confidence(ranking);
    rule.validate(ensemble)?;

    let (_, best) = rule.select(ensemble).expect("non-empty ensemble");
    let top = best.confidence();
    let tied_texts: BTreeSet<_> = ensemble
        .values()
        .filter(|p| p.confidence() == top)
        .map(|p| p.text())
        .collect();

    Ok(FusionResult {
        text: best.text().clone(),
        winning_votes: 0,
        tie_broken: tied_texts.len() > 1,
        contributors: models_predicting(ensemble, best.text()),
    })
}

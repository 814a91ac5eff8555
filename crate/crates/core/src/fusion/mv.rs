use std::collections::BTreeMap;

use super::{ensure_non_empty, models_predicting, FusionResult, TieBreak};
use crate::error::Result;
use crate::text::Text;
use crate::types::Ensemble;

/// Sequence-level majority vote.
///
/// The text predicted by the most models wins. When several texts share the
/// top count, `tiebreak` chooses among the predictions of those texts only:
/// the most confident one (HC) or the one from the best-ranked model (BM).
pub fn mv_fuse(ensemble: &Ensemble, tiebreak: TieBreak<'_>) -> Result<FusionResult> {
    ensure_non_empty(ensemble)?;
    tiebreak.validate(ensemble)?;

    let mut votes: BTreeMap<&Text, usize> = BTreeMap::new();
    for p in ensemble.values() {
        *votes.entry(p.text()).or_default() += 1;
    }
    let top = *votes.values().max().expect("non-empty");
    let tied: Vec<&Text> = votes
        .iter()
        .filter(|(_, &n)| n == top)
        .map(|(t, _)| *t)
        .collect();

    let winner = if let [only] = tied[..] {
        only.clone()
    } else {
        let candidates = ensemble.iter().filter(|(_, p)| tied.contains(&p.text()));
        let (_, chosen) = tiebreak.select(candidates).expect("tied texts have predictions");
        chosen.text().clone()
    };

    Ok(FusionResult {
        contributors: models_predicting(ensemble, &winner),
        text: winner,
        winning_votes: top,
        tie_broken: tied.len() > 1,
    })
}

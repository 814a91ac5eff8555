use std::collections::{BTreeMap, BTreeSet};

use super::{ensure_non_empty, FusionResult, TieBreak};
use crate::error::Result;
use crate::text::Text;
use crate::types::{Ensemble, ModelId, Prediction};

struct Voter<'e> {
    model: &'e ModelId,
    prediction: &'e Prediction,
    chars: Vec<char>,
}

/// Majority vote by character position.
///
/// The output length is the most common prediction length. Position `i` then
/// takes the most common character among predictions that have a position
/// `i`, and the winners are concatenated. Length and per-position ties are
/// resolved by `tiebreak` over the predictions carrying the tied values, using
/// each prediction's sequence-level confidence (HC) or its model's rank (BM).
pub fn mvcp_fuse(ensemble: &Ensemble, tiebreak: TieBreak<'_>) -> Result<FusionResult> {
    ensure_non_empty(ensemble)?;
    tiebreak.validate(ensemble)?;

    let voters: Vec<Voter<'_>> = ensemble
        .iter()
        .map(|(model, prediction)| Voter {
            model,
            prediction,
            chars: prediction.text().chars().collect(),
        })
        .collect();

    let (length, length_tie) = {
        let (tied, _) = modal(voters.iter().map(|v| v.chars.len()));
        if let [only] = tied[..] {
            (only, false)
        } else {
            let chosen = pick(&voters, tiebreak, |v| tied.contains(&v.chars.len()));
            (chosen.chars.len(), true)
        }
    };

    let mut out = String::with_capacity(length);
    let mut tie_broken = length_tie;
    let mut weakest = usize::MAX;
    let mut contributors = BTreeSet::new();
    for i in 0..length {
        let (tied, count) = modal(voters.iter().filter_map(|v| v.chars.get(i).copied()));
        let symbol = if let [only] = tied[..] {
            only
        } else {
            tie_broken = true;
            pick(&voters, tiebreak, |v| {
                v.chars.get(i).is_some_and(|c| tied.contains(c))
            })
            .chars[i]
        };
        weakest = weakest.min(count);
        contributors.extend(
            voters
                .iter()
                .filter(|v| v.chars.get(i) == Some(&symbol))
                .map(|v| v.model.clone()),
        );
        out.push(symbol);
    }

    Ok(FusionResult {
        text: Text::from_normalized(out),
        winning_votes: weakest,
        tie_broken,
        contributors,
    })
}

/// Values with the highest frequency, in ascending order, and that frequency.
fn modal<T: Ord + Copy>(values: impl Iterator<Item = T>) -> (Vec<T>, usize) {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    let top = counts.values().copied().max().unwrap_or(0);
    let tied = counts
        .into_iter()
        .filter(|&(_, n)| n == top)
        .map(|(v, _)| v)
        .collect();
    (tied, top)
}

fn pick<'v, 'e>(
    voters: &'v [Voter<'e>],
    tiebreak: TieBreak<'_>,
    eligible: impl Fn(&Voter<'e>) -> bool,
) -> &'v Voter<'e> {
    let (model, _) = tiebreak
        .select(
            voters
                .iter()
                .filter(|v| eligible(v))
                .map(|v| (v.model, v.prediction)),
        )
        .expect("at least one voter carries a tied value");
    voters
        .iter()
        .find(|v| v.model == model)
        .expect("selected voter exists")
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;
    use crate::types::Ranking;

    fn hc() -> TieBreak<'static> {
        TieBreak::highest_confidence(None)
    }

    // Position-wise mode by explicit histograms, for equal-length inputs with
    // a strict winner at every position.
    fn histogram_mode(texts: &[&str]) -> String {
        let len = texts[0].len();
        (0..len)
            .map(|i| {
                let mut hist = [0usize; 128];
                for t in texts {
                    hist[t.as_bytes()[i] as usize] += 1;
                }
                let best = (0..128).max_by_key(|&b| hist[b]).unwrap();
                assert_eq!(hist.iter().filter(|&&n| n == hist[best]).count(), 1);
                best as u8 as char
            })
            .collect()
    }

    #[test]
    fn per_position_majority_recovers_plate() {
        let entries = [
            ("ViTSTR-Base", "AS5I8D", 0.53),
            ("STAR-Net", "AS5180", 0.82),
            ("TRBA", "AS5180", 0.60),
            ("CR-NET", "AS518D", 0.83),
            ("RARE", "AS5I8D", 0.79),
        ];
        let e = ensemble(&entries);
        let r = mvcp_fuse(&e, hc()).unwrap();
        let texts: Vec<&str> = entries.iter().map(|(_, t, _)| *t).collect();
        assert_eq!(r.text.as_str(), histogram_mode(&texts));
        assert_eq!(r.text.as_str(), "AS518D");
        assert!(!r.tie_broken);
        assert_eq!(r.winning_votes, 3);
    }

    #[test]
    fn single_position_disagreement() {
        let entries = [
            ("ViTSTR-Base", "KRM7E95", 0.99),
            ("STAR-Net", "KRH7E95", 0.59),
            ("TRBA", "KRM7E95", 0.51),
            ("CR-NET", "KRH7E95", 0.73),
            ("RARE", "KRM7E95", 0.60),
        ];
        let r = mvcp_fuse(&ensemble(&entries), hc()).unwrap();
        let texts: Vec<&str> = entries.iter().map(|(_, t, _)| *t).collect();
        assert_eq!(r.text.as_str(), histogram_mode(&texts));
        assert_eq!(r.text.as_str(), "KRM7E95");
    }

    #[test]
    fn length_decided_by_majority() {
        let e = ensemble(&[("a", "ABC12", 0.9), ("b", "ABC123", 0.8), ("c", "ABC123", 0.7)]);
        let r = mvcp_fuse(&e, hc()).unwrap();
        assert_eq!(r.text.as_str(), "ABC123");
        // Position 6 has only two voters.
        assert_eq!(r.winning_votes, 2);
        assert!(!r.tie_broken);
    }

    #[test]
    fn length_tie_uses_tiebreak() {
        let (e, ranking) = ranked(&[("ABC12", 0.6), ("ABC123", 0.9)]);
        let r = mvcp_fuse(&e, TieBreak::highest_confidence(None)).unwrap();
        assert_eq!(r.text.as_str(), "ABC123");
        assert!(r.tie_broken);
        let r = mvcp_fuse(&e, TieBreak::best_model(&ranking)).unwrap();
        assert_eq!(r.text.as_str(), "ABC12");
    }

    #[test]
    fn position_tie_uses_sequence_confidence() {
        let (e, ranking) = ranked(&[("AB1", 0.4), ("AB2", 0.9), ("AB1", 0.3), ("AB2", 0.2)]);
        assert_eq!(mvcp_fuse(&e, hc()).unwrap().text.as_str(), "AB2");
        assert_eq!(
            mvcp_fuse(&e, TieBreak::best_model(&ranking)).unwrap().text.as_str(),
            "AB1"
        );
    }

    #[test]
    fn unanimity() {
        let e = ensemble(&[("a", "AB1", 0.1), ("b", "AB1", 0.9), ("c", "AB1", 0.5)]);
        let r = mvcp_fuse(&e, hc()).unwrap();
        assert_eq!(r.text.as_str(), "AB1");
        assert_eq!(r.winning_votes, 3);
        assert_eq!(r.contributors.len(), 3);
    }

    #[test]
    fn ranking_reorder_changes_only_tied_outcomes() {
        let (e, ranking) = ranked(&[("AB1", 0.5), ("AB2", 0.5), ("AB3", 0.5)]);
        let rev = Ranking::new(ranking.models().iter().rev().cloned().collect()).unwrap();
        assert_eq!(
            mvcp_fuse(&e, TieBreak::best_model(&ranking)).unwrap().text.as_str(),
            "AB1"
        );
        assert_eq!(
            mvcp_fuse(&e, TieBreak::best_model(&rev)).unwrap().text.as_str(),
            "AB3"
        );
    }
}

//! Brute-force reference implementations of sequence and per-position voting.
//!
//! These work on plain strings and share no code with [`crate::fusion`]: votes
//! are counted by pairwise comparison, positions by explicit histograms, and
//! ties are reported in full rather than resolved. [`resolve_tie`] and the
//! `expected_*` functions then apply a tie-break rule by sorting, so tests can
//! check both that the fused output is admissible and that the right
//! candidate was chosen.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::types::Ensemble;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no votes")]
    EmptyEnsemble,
}

/// One model's prediction in plain form.
#[derive(Debug, Clone, PartialEq)]
pub struct Vote {
    pub model: String,
    pub text: String,
    pub confidence: f64,
}

impl Vote {
    pub fn new(model: impl Into<String>, text: impl Into<String>, confidence: f64) -> Self {
        Self {
            model: model.into(),
            text: text.into(),
            confidence,
        }
    }
}

/// Flattens an ensemble into plain votes.
pub fn votes_from(ensemble: &Ensemble) -> Vec<Vote> {
    ensemble
        .iter()
        .map(|(m, p)| Vote::new(m.as_str(), p.text().as_str(), p.confidence()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvOutcome {
    /// Every text with the maximal vote count.
    pub tied: BTreeSet<String>,
    pub votes: usize,
}

impl MvOutcome {
    pub fn unique(&self) -> Option<&str> {
        match self.tied.len() {
            1 => self.tied.iter().next().map(String::as_str),
            _ => None,
        }
    }
}

/// Exhaustive multiset count of whole sequences.
pub fn oracle_mv(votes: &[Vote]) -> Result<MvOutcome, OracleError> {
    if votes.is_empty() {
        return Err(OracleError::EmptyEnsemble);
    }
    let counts: Vec<usize> = votes
        .iter()
        .map(|a| votes.iter().filter(|b| b.text == a.text).count())
        .collect();
    let max = *counts.iter().max().unwrap();
    let tied = votes
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c == max)
        .map(|(v, _)| v.text.clone())
        .collect();
    Ok(MvOutcome { tied, votes: max })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvcpOutcome {
    /// Lengths with the maximal length vote.
    pub lengths: BTreeSet<usize>,
    /// For each tied length, the tied modal characters at every position.
    pub positions: BTreeMap<usize, Vec<BTreeSet<char>>>,
}

impl MvcpOutcome {
    /// The only admissible output, if no length or position tie occurred.
    pub fn unique(&self) -> Option<String> {
        if self.lengths.len() != 1 {
            return None;
        }
        let per_pos = self.positions.values().next()?;
        per_pos
            .iter()
            .map(|set| {
                if set.len() == 1 {
                    set.iter().next().copied()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Whether `text` is consistent with some resolution of the ties.
    pub fn admits(&self, text: &str) -> bool {
        let chars: Vec<char> = text.chars().collect();
        match self.positions.get(&chars.len()) {
            Some(sets) => chars.iter().zip(sets).all(|(c, set)| set.contains(c)),
            None => false,
        }
    }
}

/// Per-position histograms, with the output length chosen by a length vote.
pub fn oracle_mvcp(votes: &[Vote]) -> Result<MvcpOutcome, OracleError> {
    if votes.is_empty() {
        return Err(OracleError::EmptyEnsemble);
    }
    let texts: Vec<Vec<char>> = votes.iter().map(|v| v.text.chars().collect()).collect();
    let longest = texts.iter().map(Vec::len).max().unwrap();

    let mut length_hist = vec![0usize; longest + 1];
    for t in &texts {
        length_hist[t.len()] += 1;
    }
    let top = *length_hist.iter().max().unwrap();
    let lengths: BTreeSet<usize> = (0..=longest).filter(|&l| length_hist[l] == top).collect();

    let mut positions = BTreeMap::new();
    for &len in &lengths {
        let sets = (0..len)
            .map(|i| {
                let mut hist: BTreeMap<char, usize> = BTreeMap::new();
                for t in &texts {
                    if let Some(&c) = t.get(i) {
                        *hist.entry(c).or_insert(0) += 1;
                    }
                }
                let best = hist.values().copied().max().unwrap_or(0);
                hist.into_iter()
                    .filter(|&(_, n)| n == best)
                    .map(|(c, _)| c)
                    .collect()
            })
            .collect();
        positions.insert(len, sets);
    }
    Ok(MvcpOutcome { lengths, positions })
}

/// Tie-break rule in plain form. `ranking` lists model names best first.
#[derive(Debug, Clone, Copy)]
pub enum OracleTieRule<'a> {
    /// Highest confidence; exact confidence ties by ranking when given, else
    /// by model name.
    HighestConfidence { ranking: Option<&'a [String]> },
    BestModel { ranking: &'a [String] },
}

/// Chooses among the eligible votes by sorting them under `rule`.
pub fn resolve_tie<'v>(
    votes: &'v [Vote],
    eligible: impl Fn(&Vote) -> bool,
    rule: OracleTieRule<'_>,
) -> Option<&'v Vote> {
    let rank_of = |ranking: Option<&[String]>, v: &Vote| -> (usize, String) {
        match ranking {
            Some(r) => (
                r.iter().position(|m| *m == v.model).unwrap_or(usize::MAX),
                v.model.clone(),
            ),
            None => (0, v.model.clone()),
        }
    };
    let mut pool: Vec<&Vote> = votes.iter().filter(|v| eligible(v)).collect();
    match rule {
        OracleTieRule::HighestConfidence { ranking } => pool.sort_by(|a, b| {
            match b.confidence.partial_cmp(&a.confidence) {
                Some(Ordering::Equal) | None => rank_of(ranking, a).cmp(&rank_of(ranking, b)),
                Some(o) => o,
            }
        }),
        OracleTieRule::BestModel { ranking } => {
            pool.sort_by_key(|v| rank_of(Some(ranking), v));
        }
    }
    pool.first().copied()
}

/// Full sequence-vote answer under `rule`.
pub fn expected_mv(votes: &[Vote], rule: OracleTieRule<'_>) -> Result<String, OracleError> {
    let outcome = oracle_mv(votes)?;
    if let Some(t) = outcome.unique() {
        return Ok(t.to_string());
    }
    Ok(resolve_tie(votes, |v| outcome.tied.contains(&v.text), rule)
        .expect("tied texts have votes")
        .text
        .clone())
}

/// Full per-position answer under `rule`.
pub fn expected_mvcp(votes: &[Vote], rule: OracleTieRule<'_>) -> Result<String, OracleError> {
    let outcome = oracle_mvcp(votes)?;
    let len = if outcome.lengths.len() == 1 {
        *outcome.lengths.iter().next().unwrap()
    } else {
        resolve_tie(
            votes,
            |v| outcome.lengths.contains(&v.text.chars().count()),
            rule,
        )
        .expect("tied lengths have votes")
        .text
        .chars()
        .count()
    };
    let sets = &outcome.positions[&len];
    Ok(sets
        .iter()
        .enumerate()
        .map(|(i, set)| {
            if set.len() == 1 {
                *set.iter().next().unwrap()
            } else {
                let winner = resolve_tie(
                    votes,
                    |v| v.text.chars().nth(i).is_some_and(|c| set.contains(&c)),
                    rule,
                )
                .expect("tied characters have votes");
                winner.text.chars().nth(i).unwrap()
            }
        })
        .collect())
}

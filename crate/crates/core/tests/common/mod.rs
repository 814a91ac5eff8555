#![allow(dead_code)]

use lprfuse_core::{normalize_text, Alphabet, Ensemble, ModelId, Prediction, Ranking, DEFAULT_SYMBOLS};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn id(s: &str) -> ModelId {
    ModelId::new(s).unwrap()
}

pub fn model_name(i: usize) -> String {
    format!("m{}", i + 1)
}

pub fn ensemble_of(entries: &[(String, String, f64)]) -> Ensemble {
    let alphabet = Alphabet::default();
    entries
        .iter()
        .map(|(m, t, c)| {
            (
                id(m),
                Prediction::new(normalize_text(t, &alphabet).unwrap(), *c).unwrap(),
            )
        })
        .collect()
}

/// A random ensemble with a random ranking over its models.
#[derive(Debug, Clone)]
pub struct Case {
    /// `(model, text, confidence)` in model order.
    pub entries: Vec<(String, String, f64)>,
    /// Model names, best first.
    pub ranking: Vec<String>,
}

impl Case {
    pub fn ensemble(&self) -> Ensemble {
        ensemble_of(&self.entries)
    }

    pub fn ranking(&self) -> Ranking {
        Ranking::new(self.ranking.iter().map(|m| id(m)).collect()).unwrap()
    }
}

#[derive(Debug, Clone)]
enum Edit {
    Keep,
    Substitute(Index, Index),
    Insert(Index, Index),
    Delete(Index),
}

fn edit() -> impl Strategy<Value = Edit> {
    prop_oneof![
        4 => Just(Edit::Keep),
        3 => (any::<Index>(), any::<Index>()).prop_map(|(p, s)| Edit::Substitute(p, s)),
        1 => (any::<Index>(), any::<Index>()).prop_map(|(p, s)| Edit::Insert(p, s)),
        1 => (any::<Index>()).prop_map(Edit::Delete),
    ]
}

fn apply(base: &[char], edit: &Edit, symbols: &[char]) -> String {
    let mut t = base.to_vec();
    match edit {
        Edit::Keep => {}
        Edit::Substitute(p, s) => {
            let i = p.index(t.len());
            t[i] = *s.get(symbols);
        }
        Edit::Insert(p, s) if t.len() < 8 => t.insert(p.index(t.len() + 1), *s.get(symbols)),
        Edit::Delete(p) if t.len() > 4 => {
            t.remove(p.index(t.len()));
        }
        _ => {}
    }
    t.into_iter().collect()
}

/// Ensembles of 1 to `max_models` predictions, lengths 4 to 8, drawn from a
/// few shared base plates with edits so that agreements and ties are common.
/// Confidences lie on a 0.05 grid, so exact confidence ties occur as well.
/// The alphabet is a prefix of the 36 plate symbols, sometimes tiny.
pub fn case(max_models: usize) -> impl Strategy<Value = Case> {
    let symbols: Vec<char> = DEFAULT_SYMBOLS.chars().collect();
    (1..=max_models, prop_oneof![Just(2usize), Just(3), 2usize..=36])
        .prop_flat_map(move |(k, asz)| {
            let alphabet: Vec<char> = symbols[..asz].to_vec();
            let base = prop::collection::vec(prop::sample::select(alphabet.clone()), 4..=8);
            (
                prop::collection::vec(base, 1..=3),
                prop::collection::vec((any::<Index>(), edit(), 0u32..=20), k),
                Just((0..k).collect::<Vec<_>>()).prop_shuffle(),
                Just(alphabet),
            )
        })
        .prop_map(|(bases, picks, perm, alphabet)| {
            let entries = picks
                .iter()
                .enumerate()
                .map(|(i, (pick, e, c))| {
                    let base = pick.get(&bases);
                    (model_name(i), apply(base, e, &alphabet), *c as f64 / 20.0)
                })
                .collect();
            Case {
                entries,
                ranking: perm.into_iter().map(model_name).collect(),
            }
        })
}

/// A plate over the full alphabet.
pub fn plate() -> impl Strategy<Value = String> {
    "[A-Z0-9]{4,8}"
}

pub fn confidence() -> impl Strategy<Value = f64> {
    (0u32..=20).prop_map(|c| c as f64 / 20.0)
}

/// `cases` runs without failure persistence files.
pub fn proptest_config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

//! Plate text normalization.
//!
//! Predictions and ground truths are compared as bare symbol sequences:
//! uppercase, with separators (hyphen, period, whitespace) removed, and every
//! remaining symbol drawn from a configured [`Alphabet`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

/// Default plate alphabet: Latin capitals followed by decimal digits.
pub const DEFAULT_SYMBOLS: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// An ordered set of allowed symbols.
///
/// Order matters only to the synthetic generator, which indexes into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    lookup: BTreeSet<char>,
}

impl Alphabet {
    /// Builds an alphabet from the distinct characters of `symbols`, keeping
    /// first-occurrence order.
    pub fn new(symbols: &str) -> Result<Self> {
        let mut lookup = BTreeSet::new();
        let mut ordered = Vec::new();
        for c in symbols.chars() {
            if is_separator(c) {
                return Err(FusionError::SymbolOutsideAlphabet { symbol: c });
            }
            if lookup.insert(c) {
                ordered.push(c);
            }
        }
        if ordered.is_empty() {
            return Err(FusionError::EmptyAfterNormalization);
        }
        Ok(Self {
            symbols: ordered,
            lookup,
        })
    }

    pub fn contains(&self, c: char) -> bool {
        self.lookup.contains(&c)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_string(&self) -> String {
        self.symbols.iter().collect()
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::new(DEFAULT_SYMBOLS).expect("default alphabet is valid")
    }
}

fn is_separator(c: char) -> bool {
    c == '-' || c == '.' || c.is_whitespace()
}

/// A normalized, non-empty symbol sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Text(String);

impl Text {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of symbols (not bytes).
    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn chars(&self) -> std::str::Chars<'_> {
        self.0.chars()
    }

    /// Wraps a string that is already known to be normalized.
    ///
    /// Only used where symbols were produced from an alphabet (fusion output,
    /// the generator); external input goes through [`normalize_text`].
    pub(crate) fn from_normalized(s: String) -> Self {
        debug_assert!(!s.is_empty());
        Self(s)
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Text {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Uppercases `raw`, drops separators and checks every symbol against
/// `alphabet`.
pub fn normalize_text(raw: &str, alphabet: &Alphabet) -> Result<Text> {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars().filter(|c| !is_separator(*c)) {
        for upper in c.to_uppercase() {
            if !alphabet.contains(upper) {
                return Err(FusionError::SymbolOutsideAlphabet { symbol: upper });
            }
            out.push(upper);
        }
    }
    if out.is_empty() {
        return Err(FusionError::EmptyAfterNormalization);
    }
    Ok(Text(out))
}

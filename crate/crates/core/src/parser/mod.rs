//! Analysis: tokenization, chart parsing and skolemization.

mod chart;
mod grammar;

use std::collections::BTreeMap;

use crate::lingware::{LexicalSign, SemPredicate, SemTerm};

pub use chart::{parse, ParseOutcome};
pub use grammar::{Constituent, Grammar, GrammarRule};

/// The ordered sign list handed to transfer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransferRep {
    pub signs: Vec<LexicalSign>,
    pub skolemized: bool,
}

impl TransferRep {
    pub fn new(signs: Vec<LexicalSign>) -> Self {
        TransferRep {
            signs,
            skolemized: false,
        }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Largest skolem constant used, 0 when none.
    pub fn max_constant(&self) -> u32 {
        let mut cs = Vec::new();
        for s in &self.signs {
            for p in &s.sem {
                for a in &p.args {
                    a.constants(&mut cs);
                }
            }
        }
        cs.into_iter().max().unwrap_or(0)
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self.signs.iter().map(|s| s.short()).collect();
        parts.join(" ")
    }
}

/// Replaces variables by integers numbered from 1 in order of first
/// occurrence, left to right through the sign list.
pub fn skolemize(rep: &TransferRep) -> TransferRep {
    let mut map: BTreeMap<String, u32> = BTreeMap::new();
    let mut next = rep.max_constant() + 1;
    let mut signs = Vec::with_capacity(rep.signs.len());
    for s in &rep.signs {
        let sem: Vec<SemPredicate> = s
            .sem
            .iter()
            .map(|p| {
                p.map_vars(&mut |v| {
                    let c = *map.entry(v.to_string()).or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                    SemTerm::Const(c)
                })
            })
            .collect();
        signs.push(LexicalSign { sem, ..s.clone() });
    }
    TransferRep {
        signs,
        skolemized: true,
    }
}

/// Splits text into words: whitespace separated, surrounding punctuation
/// removed, Spanish contractions expanded.
pub fn tokenize(text: &str, lang: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        let w = raw.trim_matches(|c: char| matches!(c, '.' | ',' | ';' | ':' | '!' | '?' | '¿' | '¡' | '"'));
        if w.is_empty() {
            continue;
        }
        match (lang, w.to_lowercase().as_str()) {
            ("spanish", "al") => out.extend(["a".to_string(), "el".to_string()]),
            ("spanish", "del") => out.extend(["de".to_string(), "el".to_string()]),
            _ => out.push(w.to_string()),
        }
    }
    out
}

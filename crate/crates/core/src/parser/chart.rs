//! Bottom-up CKY chart parsing with unary closure.

use std::collections::HashSet;

use super::grammar::{Constituent, Grammar};
use super::TransferRep;
use crate::lingware::{LexicalSign, Lexicon};
use crate::tfs::TypeHierarchy;

/// Longest multi-word lexeme, in tokens.
const MAX_LEXEME_TOKENS: usize = 3;
/// Bound on unary rule rounds per chart cell.
const MAX_UNARY_ROUNDS: usize = 8;

#[derive(Clone, Debug, Default)]
pub struct ParseOutcome {
    pub analyses: Vec<TransferRep>,
    pub diagnostics: Vec<String>,
}

fn candidates(h: &TypeHierarchy, lex: &Lexicon, tokens: &[String], i: usize, j: usize) -> Vec<LexicalSign> {
    let word = tokens[i..j].join(" ");
    let (mut signs, _) = lex.lookup(h, &word);
    if signs.is_empty() && i == 0 {
        let mut cs = word.chars();
        if let Some(c) = cs.next() {
            let lowered: String = c.to_lowercase().chain(cs).collect();
            if lowered != word {
                signs = lex.lookup(h, &lowered).0;
            }
        }
    }
    signs
}

struct Cell {
    items: Vec<Constituent>,
    seen: HashSet<Constituent>,
}

impl Cell {
    fn new() -> Cell {
        Cell {
            items: Vec::new(),
            seen: HashSet::new(),
        }
    }

    fn push(&mut self, c: Constituent) -> bool {
        if self.seen.insert(c.clone()) {
            self.items.push(c);
            true
        } else {
            false
        }
    }
}

/// All complete analyses of `tokens`. Each analysis lists the instantiated
/// signs in surface order with shared (not yet skolemized) variables.
pub fn parse(h: &TypeHierarchy, grammar: &Grammar, lex: &Lexicon, tokens: &[String]) -> ParseOutcome {
    let n = tokens.len();
    let mut out = ParseOutcome::default();
    if n == 0 {
        out.diagnostics.push("empty input".into());
        return out;
    }
    let mut leaf_signs: Vec<LexicalSign> = Vec::new();
    let mut chart: Vec<Vec<Cell>> = (0..=n).map(|_| (0..=n).map(|_| Cell::new()).collect()).collect();
    let mut covered = vec![false; n];
    for i in 0..n {
        for j in i + 1..=(i + MAX_LEXEME_TOKENS).min(n) {
            for s in candidates(h, lex, tokens, i, j) {
                let id = leaf_signs.len();
                let s = s.with_prefix(&format!("w{id}_"));
                chart[i][j].push(Constituent::lexical(id, &s));
                leaf_signs.push(s);
                covered[i..j].iter_mut().for_each(|c| *c = true);
            }
        }
    }
    for (i, c) in covered.iter().enumerate() {
        if !c {
            out.diagnostics.push(format!("unknown {} word: {}", lex.lang(), tokens[i]));
        }
    }
    if !out.diagnostics.is_empty() {
        return out;
    }
    let mut stamp = 0usize;
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len;
            for k in i + 1..j {
                let mut fresh = Vec::new();
                for rule in grammar.binary() {
                    for l in &chart[i][k].items {
                        if !rule.may_accept(h, 0, l) {
                            continue;
                        }
                        for r in &chart[k][j].items {
                            stamp += 1;
                            if let Some(c) = rule.apply(h, &[l, r], stamp) {
                                fresh.push(c);
                            }
                        }
                    }
                }
                for c in fresh {
                    chart[i][j].push(c);
                }
            }
            let mut start = 0;
            for _ in 0..MAX_UNARY_ROUNDS {
                let end = chart[i][j].items.len();
                if start == end {
                    break;
                }
                let mut fresh = Vec::new();
                for rule in grammar.unary() {
                    for d in &chart[i][j].items[start..end] {
                        stamp += 1;
                        if let Some(c) = rule.apply(h, &[d], stamp) {
                            fresh.push(c);
                        }
                    }
                }
                for c in fresh {
                    chart[i][j].push(c);
                }
                start = end;
            }
        }
    }
    let mut seen = HashSet::new();
    for c in &chart[0][n].items {
        if !grammar.is_root(h, c) {
            continue;
        }
        let signs: Vec<LexicalSign> = c
            .leaves
            .iter()
            .enumerate()
            .map(|(i, &id)| LexicalSign {
                syn: c.leaf_syn(i),
                sem: c.sems[i].clone(),
                ..leaf_signs[id].clone()
            })
            .collect();
        let rep = TransferRep::new(signs);
        if seen.insert(rep.clone()) {
            out.analyses.push(rep);
        }
    }
    if out.analyses.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None;
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in (i + 1..=n).rev() {
                if !chart[i][j].items.is_empty() && best.is_none_or(|(a, b, _)| j - i > b - a) {
                    best = Some((i, j, chart[i][j].items.len()));
                    break;
                }
            }
        }
        let msg = match best {
            Some((i, j, _)) => format!(
                "no parse; longest constituent spans tokens {i}..{j}: {}",
                tokens[i..j].join(" ")
            ),
            None => "no parse".to_string(),
        };
        out.diagnostics.push(msg);
    }
    out
}

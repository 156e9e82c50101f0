//! Bag generation: orderings of a target sign multiset licensed by the
//! target grammar, a permutation oracle and surface realization.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use thiserror::Error;

use crate::lingware::{synthesize, LexicalSign, MorphError};
use crate::parser::{Constituent, Grammar};
use crate::tfs::TypeHierarchy;

pub const DEFAULT_ORACLE_LIMIT: usize = 8;

/// Set of bag indices; one machine word for bags up to 64 elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coverage(Vec<u64>);

impl Coverage {
    pub fn empty(n: usize) -> Self {
        Coverage(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn full(n: usize) -> Self {
        let mut c = Coverage::empty(n);
        for i in 0..n {
            c.insert(i);
        }
        c
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn disjoint(&self, other: &Coverage) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Coverage) -> Coverage {
        Coverage(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A chart edge of the bag generator.
#[derive(Clone, Debug)]
pub struct GenerationEdge {
    pub coverage: Coverage,
    pub constituent: Constituent,
}

impl GenerationEdge {
    /// Bag indices in surface order.
    pub fn linearization(&self) -> &[usize] {
        &self.constituent.leaves
    }
}

/// One ordering of the bag: bag indices in surface order and the signs
/// instantiated by the grammar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    pub order: Vec<usize>,
    pub signs: Vec<LexicalSign>,
}

#[derive(Clone, Debug, Default)]
pub struct Generation {
    pub sequences: Vec<Sequence>,
    pub diagnostic: Option<String>,
    /// Chart lines, filled when tracing.
    pub trace: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("bag of {size} elements exceeds the oracle limit of {limit}")]
    TooLarge { size: usize, limit: usize },
}

fn sequence(bag: &[LexicalSign], c: &Constituent) -> Sequence {
    Sequence {
        order: c.leaves.clone(),
        signs: c
            .leaves
            .iter()
            .enumerate()
            .map(|(i, &id)| LexicalSign {
                syn: c.leaf_syn(i),
                sem: c.sems[i].clone(),
                ..bag[id].clone()
            })
            .collect(),
    }
}

fn describe(bag: &[LexicalSign], c: &Constituent) -> String {
    let words: Vec<String> = c.leaves.iter().map(|&i| bag[i].short()).collect();
    words.join(" ")
}

/// All orderings of `bag` that the grammar derives as a root category.
/// Edges combine only over disjoint coverage; the daughter order of the
/// rule fixes the concatenation order.
pub fn generate(h: &TypeHierarchy, grammar: &Grammar, bag: &[LexicalSign], trace: bool) -> Generation {
    let mut out = Generation::default();
    let n = bag.len();
    if n == 0 {
        out.diagnostic = Some("empty bag".into());
        return out;
    }
    let mut stamp = 0usize;
    let mut chart: Vec<GenerationEdge> = Vec::new();
    let mut seen: HashSet<Constituent> = HashSet::new();
    let mut agenda: Vec<GenerationEdge> = Vec::new();
    for (i, s) in bag.iter().enumerate() {
        let c = Constituent::lexical(i, s);
        if seen.insert(c.clone()) {
            let mut coverage = Coverage::empty(n);
            coverage.insert(i);
            agenda.push(GenerationEdge { coverage, constituent: c });
        }
    }
    agenda.reverse();
    while let Some(edge) = agenda.pop() {
        let mut fresh: Vec<(Coverage, Constituent)> = Vec::new();
        for rule in grammar.unary() {
            stamp += 1;
            if let Some(c) = rule.apply(h, &[&edge.constituent], stamp) {
                fresh.push((edge.coverage.clone(), c));
            }
        }
        for rule in grammar.binary() {
            let as_left = rule.may_accept(h, 0, &edge.constituent);
            let as_right = rule.may_accept(h, 1, &edge.constituent);
            if !as_left && !as_right {
                continue;
            }
            for other in &chart {
                if !edge.coverage.disjoint(&other.coverage) {
                    continue;
                }
                let cov = edge.coverage.union(&other.coverage);
                if as_left && rule.may_accept(h, 1, &other.constituent) {
                    stamp += 1;
                    if let Some(c) = rule.apply(h, &[&edge.constituent, &other.constituent], stamp) {
                        fresh.push((cov.clone(), c));
                    }
                }
                if as_right && rule.may_accept(h, 0, &other.constituent) {
                    stamp += 1;
                    if let Some(c) = rule.apply(h, &[&other.constituent, &edge.constituent], stamp) {
                        fresh.push((cov.clone(), c));
                    }
                }
            }
        }
        if trace {
            out.trace.push(format!(
                "edge {} {{{}}} {}",
                crate::tfs::render(h, &edge.constituent.graph.project(0), &[]),
                edge.linearization().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                describe(bag, &edge.constituent)
            ));
        }
        chart.push(edge);
        for (coverage, c) in fresh {
            if seen.insert(c.clone()) {
                agenda.push(GenerationEdge { coverage, constituent: c });
            }
        }
    }
    let full = Coverage::full(n);
    let mut found = HashSet::new();
    for e in &chart {
        if e.coverage == full && grammar.is_root(h, &e.constituent) {
            let s = sequence(bag, &e.constituent);
            if found.insert(s.clone()) {
                out.sequences.push(s);
            }
        }
    }
    out.sequences.sort_by(|a, b| a.order.cmp(&b.order));
    if out.sequences.is_empty() {
        let best = chart
            .iter()
            .filter(|e| e.constituent.label.is_none())
            .max_by_key(|e| e.coverage.len());
        out.diagnostic = Some(match best {
            Some(e) => format!(
                "no ordering found; largest edge covers {} of {}: {}",
                e.coverage.len(),
                n,
                describe(bag, &e.constituent)
            ),
            None => "no ordering found".into(),
        });
    }
    out
}

/// Tries every permutation of the bag and parses it. Contiguous spans are
/// memoized by their ordered index tuple.
pub fn brute_force_generate(
    h: &TypeHierarchy,
    grammar: &Grammar,
    bag: &[LexicalSign],
    limit: usize,
) -> Result<Vec<Sequence>, GenerateError> {
    if bag.len() > limit {
        return Err(GenerateError::TooLarge {
            size: bag.len(),
            limit,
        });
    }
    if bag.is_empty() {
        return Ok(Vec::new());
    }
    let mut oracle = Oracle {
        h,
        grammar,
        bag,
        memo: HashMap::new(),
        stamp: 0,
    };
    let mut found = HashSet::new();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..bag.len()).collect();
    permutations(&mut perm, 0, &mut |p| {
        for c in oracle.span(p).iter() {
            if grammar.is_root(h, c) {
                let s = sequence(bag, c);
                if found.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
    });
    out.sort_by(|a, b| a.order.cmp(&b.order));
    Ok(out)
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

struct Oracle<'a> {
    h: &'a TypeHierarchy,
    grammar: &'a Grammar,
    bag: &'a [LexicalSign],
    memo: HashMap<Vec<usize>, Rc<Vec<Constituent>>>,
    stamp: usize,
}

impl Oracle<'_> {
    fn span(&mut self, order: &[usize]) -> Rc<Vec<Constituent>> {
        if let Some(r) = self.memo.get(order) {
            return r.clone();
        }
        let mut items = Vec::new();
        if order.len() == 1 {
            items.push(Constituent::lexical(order[0], &self.bag[order[0]]));
        } else {
            for k in 1..order.len() {
                let left = self.span(&order[..k]);
                if left.is_empty() {
                    continue;
                }
                let right = self.span(&order[k..]);
                for rule in self.grammar.binary() {
                    for l in left.iter() {
                        for r in right.iter() {
                            self.stamp += 1;
                            if let Some(c) = rule.apply(self.h, &[l, r], self.stamp) {
                                items.push(c);
                            }
                        }
                    }
                }
            }
        }
        let closed = Rc::new(self.grammar.close_unary(self.h, items, &mut self.stamp));
        self.memo.insert(order.to_vec(), closed.clone());
        closed
    }
}

/// Surface string of a generated sequence.
pub fn realize(h: &TypeHierarchy, signs: &[LexicalSign]) -> Result<String, MorphError> {
    let mut words = Vec::with_capacity(signs.len());
    for s in signs {
        words.push(synthesize(h, s, &s.syn)?.replace('_', " "));
    }
    let spanish = signs.first().is_some_and(|s| s.lang.as_str() == "spanish");
    let mut text = words.join(" ");
    if spanish {
        text = contract(&text);
    }
    let mut cs = text.chars();
    Ok(match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => text,
    })
}

fn contract(text: &str) -> String {
    let mut out: Vec<&str> = Vec::new();
    let words: Vec<&str> = text.split(' ').collect();
    let mut i = 0;
    while i < words.len() {
        match (words[i], words.get(i + 1)) {
            ("a", Some(&"el")) => {
                out.push("al");
                i += 2;
            }
            ("de", Some(&"el")) => {
                out.push("del");
                i += 2;
            }
            (w, _) => {
                out.push(w);
                i += 1;
            }
        }
    }
    out.join(" ")
}

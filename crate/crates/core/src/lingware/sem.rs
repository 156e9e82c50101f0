//! Flat semantics: predicates over variables and skolem constants.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// A semantic argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SemTerm {
    Var(String),
    /// Skolem constant, numbered from 1.
    Const(u32),
    /// Joinable form (`x⊔y`): unifies with any of its members. Members are
    /// never themselves joins.
    Join(Vec<SemTerm>),
}

impl SemTerm {
    pub fn var(name: &str) -> SemTerm {
        SemTerm::Var(name.to_string())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SemTerm::Var(_) => false,
            SemTerm::Const(_) => true,
            SemTerm::Join(ts) => ts.iter().all(SemTerm::is_ground),
        }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            SemTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            SemTerm::Const(_) => {}
            SemTerm::Join(ts) => ts.iter().for_each(|t| t.vars(out)),
        }
    }

    pub fn constants(&self, out: &mut Vec<u32>) {
        match self {
            SemTerm::Var(_) => {}
            SemTerm::Const(c) => out.push(*c),
            SemTerm::Join(ts) => ts.iter().for_each(|t| t.constants(out)),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> SemTerm) -> SemTerm {
        match self {
            SemTerm::Var(v) => f(v),
            SemTerm::Const(c) => SemTerm::Const(*c),
            SemTerm::Join(ts) => join_of(ts.iter().map(|t| t.map_vars(f)).collect()),
        }
    }
}

/// Normalizes a join: flattens, dedups, collapses singletons.
pub fn join_of(parts: Vec<SemTerm>) -> SemTerm {
    let mut flat: Vec<SemTerm> = Vec::new();
    for p in parts {
        match p {
            SemTerm::Join(inner) => {
                for t in inner {
                    if !flat.contains(&t) {
                        flat.push(t)
                    }
                }
            }
            t => {
                if !flat.contains(&t) {
                    flat.push(t)
                }
            }
        }
    }
    if flat.len() == 1 {
        flat.pop().unwrap()
    } else {
        SemTerm::Join(flat)
    }
}

impl fmt::Display for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemTerm::Var(v) => write!(f, "{v}"),
            SemTerm::Const(c) => write!(f, "{c}"),
            SemTerm::Join(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "⊔")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SemPredicate {
    pub name: String,
    pub args: Vec<SemTerm>,
}

impl SemPredicate {
    pub fn new(name: &str, args: Vec<SemTerm>) -> Self {
        SemPredicate {
            name: name.to_string(),
            args,
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> SemTerm) -> SemPredicate {
        SemPredicate {
            name: self.name.clone(),
            args: self.args.iter().map(|a| a.map_vars(f)).collect(),
        }
    }
}

impl fmt::Display for SemPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Variable bindings produced by term unification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<String, SemTerm>,
}

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &str) -> Option<&SemTerm> {
        self.map.get(v)
    }

    pub fn bind(&mut self, v: &str, t: SemTerm) {
        self.map.insert(v.to_string(), t);
    }

    pub fn is_bound(&self, v: &str) -> bool {
        self.map.contains_key(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &SemTerm)> {
        self.map.iter()
    }

    /// Fully resolves a term.
    pub fn apply(&self, t: &SemTerm) -> SemTerm {
        match t {
            SemTerm::Var(v) => match self.map.get(v) {
                Some(b) => self.apply(b),
                None => t.clone(),
            },
            SemTerm::Const(_) => t.clone(),
            SemTerm::Join(ts) => join_of(ts.iter().map(|x| self.apply(x)).collect()),
        }
    }

    pub fn apply_pred(&self, p: &SemPredicate) -> SemPredicate {
        SemPredicate {
            name: p.name.clone(),
            args: p.args.iter().map(|a| self.apply(a)).collect(),
        }
    }

    /// Unifies two terms, extending the bindings. Constants only unify with
    /// equal constants; a join unifies with a constant when one of its
    /// members does.
    pub fn unify(&mut self, a: &SemTerm, b: &SemTerm) -> bool {
        let a = self.apply(a);
        let b = self.apply(b);
        match (&a, &b) {
            (SemTerm::Var(x), SemTerm::Var(y)) => {
                if x != y {
                    self.bind(x, b.clone());
                }
                true
            }
            (SemTerm::Var(x), _) => {
                self.bind(x, b.clone());
                true
            }
            (_, SemTerm::Var(y)) => {
                self.bind(y, a.clone());
                true
            }
            (SemTerm::Const(c), SemTerm::Const(d)) => c == d,
            (SemTerm::Join(ms), other @ SemTerm::Const(_))
            | (other @ SemTerm::Const(_), SemTerm::Join(ms)) => self.unify_member(ms, other),
            (SemTerm::Join(ms), SemTerm::Join(ns)) => {
                for n in ns {
                    let saved = self.clone();
                    if self.unify_member(ms, n) {
                        return true;
                    }
                    *self = saved;
                }
                false
            }
        }
    }

    fn unify_member(&mut self, members: &[SemTerm], c: &SemTerm) -> bool {
        if members.iter().any(|m| m == c) {
            return true;
        }
        for m in members {
            if let SemTerm::Var(v) = m {
                self.bind(v, c.clone());
                return true;
            }
        }
        false
    }
}

/// Semantic indices of a predicate list: all arguments in order of first
/// occurrence.
pub fn index_of(sem: &[SemPredicate]) -> Vec<SemTerm> {
    let mut out: Vec<SemTerm> = Vec::new();
    for p in sem {
        for a in &p.args {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
    }
    out
}

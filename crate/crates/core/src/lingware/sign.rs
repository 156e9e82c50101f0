use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::sem::{index_of, SemPredicate, SemTerm, Subst};
use crate::tfs::{render, FeatId, FeatureStructure, TypeHierarchy, TypeId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lang(pub String);

impl Lang {
    pub fn new(name: &str) -> Lang {
        Lang(name.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An inflectional paradigm cell: a named bundle of syntactic feature values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub name: String,
    /// `(path below syn, value)`.
    pub bundle: Vec<(Vec<FeatId>, TypeId)>,
}

/// The surface forms of one lemma. Multi-word forms use `_` between words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Paradigm {
    pub cells: Vec<(Cell, String)>,
}

impl Paradigm {
    pub fn has_cell_with(&self, path: &[FeatId], ty: TypeId) -> bool {
        self.cells
            .iter()
            .any(|(c, _)| c.bundle.iter().any(|(p, t)| p == path && *t == ty))
    }
}

/// One word's record: orthography, syntax, Qualia, language and semantics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexicalSign {
    /// Lexeme identity, shared by every instance of the same lexicon entry.
    pub id: String,
    pub orth: String,
    pub syn: FeatureStructure,
    pub qualia: FeatureStructure,
    pub lang: Lang,
    pub sem: Vec<SemPredicate>,
    pub morph: Arc<Paradigm>,
    /// Derivational links to other lexicon entries, by kind (`adj`, `tree`).
    pub derivs: Arc<BTreeMap<String, String>>,
}

impl LexicalSign {
    /// Semantic indices: arguments of all predicates, first occurrences in order.
    pub fn index(&self) -> Vec<SemTerm> {
        index_of(&self.sem)
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.sem {
            for a in &p.args {
                a.vars(&mut out);
            }
        }
        out
    }

    pub fn map_vars(&self, mut f: impl FnMut(&str) -> SemTerm) -> LexicalSign {
        LexicalSign {
            sem: self.sem.iter().map(|p| p.map_vars(&mut f)).collect(),
            ..self.clone()
        }
    }

    /// Renames every variable by prefixing it.
    pub fn with_prefix(&self, prefix: &str) -> LexicalSign {
        self.map_vars(|v| SemTerm::Var(format!("{prefix}{v}")))
    }

    pub fn apply(&self, s: &Subst) -> LexicalSign {
        LexicalSign {
            sem: self.sem.iter().map(|p| s.apply_pred(p)).collect(),
            ..self.clone()
        }
    }

    /// Renames the semantic indices positionally to `args`. Fails on an
    /// arity mismatch.
    pub fn with_index(&self, args: &[SemTerm]) -> Option<LexicalSign> {
        let index = self.index();
        if index.len() != args.len() {
            return None;
        }
        let mut map: BTreeMap<SemTerm, SemTerm> = BTreeMap::new();
        for (old, new) in index.iter().zip(args) {
            map.insert(old.clone(), new.clone());
        }
        Some(LexicalSign {
            sem: self
                .sem
                .iter()
                .map(|p| SemPredicate {
                    name: p.name.clone(),
                    args: p.args.iter().map(|a| map[a].clone()).collect(),
                })
                .collect(),
            ..self.clone()
        })
    }

    pub fn syn_type(&self) -> TypeId {
        self.syn.root_type()
    }

    /// Abbreviated form, `love1(2,1,3)`.
    pub fn short(&self) -> String {
        let idx: Vec<String> = self.index().iter().map(|t| t.to_string()).collect();
        format!("{}({})", self.id, idx.join(","))
    }

    /// Full record with the given syn/qualia paths shrunk.
    pub fn render(&self, h: &TypeHierarchy, shrink_qualia: bool) -> String {
        let sem: Vec<String> = self.sem.iter().map(|p| p.to_string()).collect();
        let qualia = if shrink_qualia {
            render(h, &self.qualia, &[Vec::new()])
        } else {
            render(h, &self.qualia, &[])
        };
        format!(
            "{}\n  orth: {}\n  syn: {}\n  qualia: {}\n  lang: {}\n  sem: {}",
            h.type_name(self.syn_type()),
            self.orth,
            render(h, &self.syn, &[]),
            qualia,
            self.lang,
            sem.join(" & ")
        )
    }
}

impl fmt::Display for LexicalSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short())
    }
}

//! Lexical signs, semantics, lexicons and monolingual lexical rules.

mod lexicon;
mod monorule;
mod sem;
mod sign;

use thiserror::Error;

use crate::dsl::{DslError, Stmt, TermDecl};
use crate::tfs::{FeatId, HierarchyDecls, HierarchyError, TypeHierarchy, TypeId};

pub use lexicon::{synthesize, Lexicon, MorphError};
pub use monorule::{apply_mono_rule, MonoLexRule, MonoRuleKind};
pub use sem::{index_of, join_of, SemPredicate, SemTerm, Subst};
pub use sign::{Cell, Lang, LexicalSign, Paradigm};

#[derive(Debug, Error)]
pub enum LingwareError {
    #[error("{0}")]
    Dsl(#[from] DslError),
    #[error("{0}")]
    Hierarchy(#[from] HierarchyError),
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("{path}: {source}")]
    File {
        path: String,
        source: Box<LingwareError>,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl LingwareError {
    pub fn invalid(line: usize, msg: impl Into<String>) -> Self {
        LingwareError::Invalid {
            line,
            msg: msg.into(),
        }
    }

    pub fn in_file(self, path: &str) -> Self {
        LingwareError::File {
            path: path.to_string(),
            source: Box::new(self),
        }
    }
}

/// Types and features the engine itself refers to.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub v: TypeId,
    pub n: TypeId,
    pub nmod: TypeId,
    pub adj: TypeId,
    pub qualia: TypeId,
    pub plus: TypeId,
    pub fin: TypeId,
    pub inf: TypeId,
    pub ger: TypeId,
    pub sg: TypeId,
    pub vform: FeatId,
    pub tense: FeatId,
    pub agr: FeatId,
    pub caus: FeatId,
    pub calt: FeatId,
}

impl Vocab {
    pub fn new(h: &TypeHierarchy) -> Result<Vocab, HierarchyError> {
        Ok(Vocab {
            v: h.type_id("v")?,
            n: h.type_id("n")?,
            nmod: h.type_id("nmod")?,
            adj: h.type_id("adj")?,
            qualia: h.type_id("qualia")?,
            plus: h.type_id("plus")?,
            fin: h.type_id("fin")?,
            inf: h.type_id("inf")?,
            ger: h.type_id("ger")?,
            sg: h.type_id("3sg")?,
            vform: h.feature_id("vform")?,
            tense: h.feature_id("tense")?,
            agr: h.feature_id("agr")?,
            caus: h.feature_id("caus")?,
            calt: h.feature_id("calt")?,
        })
    }

    pub fn is_verb(&self, h: &TypeHierarchy, t: TypeId) -> bool {
        h.subsumes(self.v, t)
    }

    pub fn is_noun(&self, h: &TypeHierarchy, t: TypeId) -> bool {
        h.subsumes(self.n, t)
    }
}

pub fn term_from_decl(t: &TermDecl) -> SemTerm {
    match t {
        TermDecl::Var(v) => SemTerm::Var(v.clone()),
        TermDecl::Const(c) => SemTerm::Const(*c),
        TermDecl::Join(ts) => join_of(ts.iter().map(term_from_decl).collect()),
    }
}

/// Compiles the `types` and `approp` statements of a hierarchy file.
pub fn hierarchy_from_stmts(stmts: &[Stmt]) -> Result<TypeHierarchy, LingwareError> {
    let mut decls = HierarchyDecls::default();
    for s in stmts {
        match s {
            Stmt::Types { parent, children } => {
                for c in children {
                    decls = decls.edge(parent, c);
                }
            }
            Stmt::Approp { ty, feats } => {
                for (f, v) in feats {
                    decls = decls.feature(ty, f, v);
                }
            }
            _ => {}
        }
    }
    Ok(TypeHierarchy::compile(&decls)?)
}

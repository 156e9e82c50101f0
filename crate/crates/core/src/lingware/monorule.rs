//! Monolingual lexical rules: functions from a sign to derived signs.

use std::fmt;
use std::sync::Arc;

use super::lexicon::Lexicon;
use super::sem::{SemPredicate, SemTerm};
use super::sign::{LexicalSign, Paradigm};
use super::Vocab;
use crate::tfs::{build, FeatureStructure, TypeHierarchy, TypeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonoRuleKind {
    Identity,
    Adjective,
    Gerund,
    Infinitive,
    Causative,
    NounNoun,
    FruitTreeDeriv,
}

impl MonoRuleKind {
    pub const ALL: [MonoRuleKind; 7] = [
        MonoRuleKind::Identity,
        MonoRuleKind::Adjective,
        MonoRuleKind::Gerund,
        MonoRuleKind::Infinitive,
        MonoRuleKind::Causative,
        MonoRuleKind::NounNoun,
        MonoRuleKind::FruitTreeDeriv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MonoRuleKind::Identity => "identity",
            MonoRuleKind::Adjective => "adjective",
            MonoRuleKind::Gerund => "gerund",
            MonoRuleKind::Infinitive => "infinitive",
            MonoRuleKind::Causative => "causative",
            MonoRuleKind::NounNoun => "noun-noun",
            MonoRuleKind::FruitTreeDeriv => "fruit-tree-deriv",
        }
    }

    pub fn from_name(name: &str) -> Option<MonoRuleKind> {
        MonoRuleKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for MonoRuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonoLexRule {
    pub kind: MonoRuleKind,
}

impl MonoLexRule {
    pub fn new(kind: MonoRuleKind) -> Self {
        MonoLexRule { kind }
    }
}

fn fresh(sign: &LexicalSign, base: &str) -> String {
    let used = sign.vars();
    let mut v = base.to_string();
    while used.contains(&v) {
        v.push('\'');
    }
    v
}

fn set_feature(
    h: &TypeHierarchy,
    sign: &LexicalSign,
    feat: crate::tfs::FeatId,
    ty: TypeId,
) -> Option<LexicalSign> {
    let syn = sign
        .syn
        .with_value(h, &[feat], &FeatureStructure::atom(ty))?;
    Some(LexicalSign { syn, ..sign.clone() })
}

/// A verb form: requires the paradigm to provide a cell for it.
fn verb_form(h: &TypeHierarchy, vocab: &Vocab, sign: &LexicalSign, vform: TypeId) -> Vec<LexicalSign> {
    if !vocab.is_verb(h, sign.syn_type()) || !sign.morph.has_cell_with(&[vocab.vform], vform) {
        return Vec::new();
    }
    set_feature(h, sign, vocab.vform, vform).into_iter().collect()
}

/// The lexicon sign linked by `kind`, with its indices renamed to `sign`'s.
fn follow_deriv(sign: &LexicalSign, kind: &str, lex: &Lexicon) -> Vec<LexicalSign> {
    sign.derivs
        .get(kind)
        .and_then(|id| lex.get(id))
        .and_then(|d| d.with_index(&sign.index()))
        .into_iter()
        .collect()
}

/// All signs `rule` derives from `sign`. Rules that do not apply yield none.
pub fn apply_mono_rule(
    h: &TypeHierarchy,
    vocab: &Vocab,
    rule: &MonoLexRule,
    sign: &LexicalSign,
    lex: &Lexicon,
) -> Vec<LexicalSign> {
    match rule.kind {
        MonoRuleKind::Identity => vec![sign.map_vars(|v| SemTerm::Var(format!("{v}'")))],
        MonoRuleKind::Adjective => follow_deriv(sign, "adj", lex),
        MonoRuleKind::FruitTreeDeriv => follow_deriv(sign, "tree", lex),
        MonoRuleKind::Gerund => verb_form(h, vocab, sign, vocab.ger),
        MonoRuleKind::Infinitive => verb_form(h, vocab, sign, vocab.inf),
        MonoRuleKind::Causative => {
            if !vocab.is_verb(h, sign.syn_type()) || sign.sem.len() != 1 || sign.sem[0].args.len() != 2 {
                return Vec::new();
            }
            let alternates = sign
                .qualia
                .type_at(&[vocab.calt])
                .is_some_and(|t| h.glb(t, vocab.plus).is_some());
            if !alternates {
                return Vec::new();
            }
            let Some(mut out) = set_feature(h, sign, vocab.caus, vocab.plus) else {
                return Vec::new();
            };
            let e = sign.sem[0].args[0].clone();
            let causer = SemTerm::Var(fresh(sign, "c"));
            let causee = SemTerm::Var(fresh(sign, "t"));
            out.sem = vec![
                SemPredicate::new("cause1", vec![e.clone(), causer]),
                SemPredicate::new(&sign.sem[0].name, vec![e, causee]),
            ];
            vec![out]
        }
        MonoRuleKind::NounNoun => {
            if !vocab.is_noun(h, sign.syn_type()) || sign.sem.len() != 1 || sign.sem[0].args.len() != 1 {
                return Vec::new();
            }
            let Some(syn) = build(h, vocab.nmod, &[(vec![vocab.agr], vocab.sg)]) else {
                return Vec::new();
            };
            let singular = Paradigm {
                cells: sign
                    .morph
                    .cells
                    .iter()
                    .filter(|(c, _)| {
                        c.bundle
                            .iter()
                            .all(|(p, t)| *p != [vocab.agr] || *t == vocab.sg)
                    })
                    .cloned()
                    .collect(),
            };
            let y = sign.sem[0].args[0].clone();
            let z = SemTerm::Var(fresh(sign, "z"));
            vec![LexicalSign {
                syn,
                sem: vec![
                    sign.sem[0].clone(),
                    SemPredicate::new("compound1", vec![y, z]),
                ],
                morph: Arc::new(singular),
                ..sign.clone()
            }]
        }
    }
}

//! Monolingual lexicons with table-driven morphology.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use super::monorule::{apply_mono_rule, MonoLexRule, MonoRuleKind};
use super::sem::SemPredicate;
use super::sign::{Cell, Lang, LexicalSign, Paradigm};
use super::{term_from_decl, LingwareError, Vocab};
use crate::dsl::{SignDecl, Stmt};
use crate::tfs::{build, parse_path, render, unify, FeatId, FeatureStructure, TypeHierarchy, TypeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphError {
    #[error("{sign}: no paradigm cell for {bundle}")]
    MissingCell { sign: String, bundle: String },
    #[error("{sign}: inflection not instantiated ({bundle} matches forms {forms:?})")]
    Uninstantiated {
        sign: String,
        bundle: String,
        forms: Vec<String>,
    },
}

#[derive(Clone, Debug)]
pub struct Lexicon {
    lang: Lang,
    cells: BTreeMap<String, Cell>,
    signs: Vec<LexicalSign>,
    by_id: HashMap<String, usize>,
    closure: Vec<MonoRuleKind>,
    /// Listed signs plus the closure under `closure` rules; used for lookup.
    analysis: Vec<LexicalSign>,
}

impl Lexicon {
    /// Builds a lexicon from parsed statements. Statements that belong to
    /// other components (grammar rules, root) are ignored.
    pub fn from_stmts(h: &TypeHierarchy, vocab: &Vocab, stmts: &[Stmt]) -> Result<Lexicon, LingwareError> {
        let mut lang = None;
        let mut cells = BTreeMap::new();
        let mut closure = Vec::new();
        let mut decls = Vec::new();
        for s in stmts {
            match s {
                Stmt::Lang(l) => lang = Some(Lang::new(l)),
                Stmt::Cell { name, feats } => {
                    let mut bundle = Vec::new();
                    for (p, t) in feats {
                        bundle.push((parse_path(h, p)?, h.type_id(t)?));
                    }
                    cells.insert(
                        name.clone(),
                        Cell {
                            name: name.clone(),
                            bundle,
                        },
                    );
                }
                Stmt::Closure(names) => {
                    for n in names {
                        closure.push(MonoRuleKind::from_name(n).ok_or_else(|| {
                            LingwareError::invalid(0, format!("unknown lexical rule {n}"))
                        })?);
                    }
                }
                Stmt::Sign(sd) => decls.push(sd),
                _ => {}
            }
        }
        let lang = lang.ok_or_else(|| LingwareError::invalid(0, "lexicon without `lang`"))?;
        let mut signs = Vec::new();
        let mut by_id = HashMap::new();
        for sd in decls {
            let sign = sign_from_decl(h, vocab, &lang, &cells, sd)?;
            if by_id.insert(sign.id.clone(), signs.len()).is_some() {
                return Err(LingwareError::invalid(sd.line, format!("duplicate sign {}", sd.id)));
            }
            signs.push(sign);
        }
        let mut lex = Lexicon {
            lang,
            cells,
            signs,
            by_id,
            closure,
            analysis: Vec::new(),
        };
        for s in &lex.signs {
            for (kind, target) in s.derivs.iter() {
                if !lex.by_id.contains_key(target) {
                    return Err(LingwareError::invalid(
                        0,
                        format!("{}: deriv {kind} names unknown sign {target}", s.id),
                    ));
                }
            }
        }
        let mut analysis = lex.signs.clone();
        for kind in lex.closure.clone() {
            let rule = MonoLexRule::new(kind);
            for s in &lex.signs {
                for d in apply_mono_rule(h, vocab, &rule, s, &lex) {
                    if !analysis.contains(&d) {
                        analysis.push(d);
                    }
                }
            }
        }
        lex.analysis = analysis;
        Ok(lex)
    }

    pub fn lang(&self) -> &Lang {
        &self.lang
    }

    pub fn signs(&self) -> &[LexicalSign] {
        &self.signs
    }

    /// Listed signs plus signs derived by the closure rules.
    pub fn analysis_signs(&self) -> &[LexicalSign] {
        &self.analysis
    }

    pub fn get(&self, id: &str) -> Option<&LexicalSign> {
        self.by_id.get(id).map(|&i| &self.signs[i])
    }

    pub fn cell(&self, name: &str) -> Option<&Cell> {
        self.cells.get(name)
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    /// Every sign with a paradigm cell realizing `word`, instantiated with
    /// that cell's features. An unknown word yields no signs and a diagnostic.
    pub fn lookup(&self, h: &TypeHierarchy, word: &str) -> (Vec<LexicalSign>, Option<String>) {
        let key = word.replace(' ', "_");
        let mut out: Vec<LexicalSign> = Vec::new();
        for s in &self.analysis {
            for (cell, form) in &s.morph.cells {
                if *form != key {
                    continue;
                }
                let Some(bundle) = cell_fs(h, s.syn_type(), cell) else {
                    continue;
                };
                if let Some(syn) = unify(h, &s.syn, &bundle) {
                    let inst = LexicalSign { syn, ..s.clone() };
                    if !out.contains(&inst) {
                        out.push(inst);
                    }
                }
            }
        }
        let diag = out
            .is_empty()
            .then(|| format!("unknown {} word: {word}", self.lang));
        (out, diag)
    }

    /// All surface forms known to the lexicon.
    pub fn forms(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .analysis
            .iter()
            .flat_map(|s| s.morph.cells.iter().map(|(_, f)| f.as_str()))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

fn cell_fs(h: &TypeHierarchy, root: TypeId, cell: &Cell) -> Option<FeatureStructure> {
    build(h, root, &cell.bundle)
}

/// Surface form of `sign` for the inflection bundle `inflection` (a syn
/// structure). Underscores of multi-word lexemes become spaces.
pub fn synthesize(
    h: &TypeHierarchy,
    sign: &LexicalSign,
    inflection: &FeatureStructure,
) -> Result<String, MorphError> {
    let mut forms: Vec<&str> = Vec::new();
    for (cell, form) in &sign.morph.cells {
        let fits = cell.bundle.iter().all(|(path, ty)| {
            inflection
                .type_at(path)
                .is_some_and(|t| h.subsumes(*ty, t))
        });
        if fits && !forms.contains(&form.as_str()) {
            forms.push(form);
        }
    }
    match forms.as_slice() {
        [one] => Ok(one.replace('_', " ")),
        [] => Err(MorphError::MissingCell {
            sign: sign.id.clone(),
            bundle: render(h, inflection, &[]),
        }),
        many => Err(MorphError::Uninstantiated {
            sign: sign.id.clone(),
            bundle: render(h, inflection, &[]),
            forms: many.iter().map(|f| f.replace('_', " ")).collect(),
        }),
    }
}

fn sign_from_decl(
    h: &TypeHierarchy,
    vocab: &Vocab,
    lang: &Lang,
    cells: &BTreeMap<String, Cell>,
    sd: &SignDecl,
) -> Result<LexicalSign, LingwareError> {
    let bad = |msg: String| LingwareError::invalid(sd.line, format!("sign {}: {msg}", sd.id));
    let root = h.type_id(&sd.ty).map_err(|e| bad(e.to_string()))?;
    let mut syn_assigns: Vec<(Vec<FeatId>, TypeId)> = Vec::new();
    let mut qualia_assigns: Vec<(Vec<FeatId>, TypeId)> = Vec::new();
    for (path, ty) in &sd.assigns {
        let ty = h.type_id(ty).map_err(|e| bad(e.to_string()))?;
        let (head, rest) = path.split_once('.').unwrap_or((path.as_str(), ""));
        let p = parse_path(h, rest).map_err(|e| bad(e.to_string()))?;
        match head {
            "syn" => syn_assigns.push((p, ty)),
            "qualia" => qualia_assigns.push((p, ty)),
            other => return Err(bad(format!("unknown path root {other}"))),
        }
    }
    let syn = build(h, root, &syn_assigns).ok_or_else(|| bad("ill-typed syn".into()))?;
    let qualia =
        build(h, vocab.qualia, &qualia_assigns).ok_or_else(|| bad("ill-typed qualia".into()))?;
    let sem: Vec<SemPredicate> = sd
        .sem
        .iter()
        .map(|p| SemPredicate {
            name: p.name.clone(),
            args: p.args.iter().map(term_from_decl).collect(),
        })
        .collect();
    if sem.is_empty() {
        return Err(bad("missing sem".into()));
    }
    let mut paradigm = Paradigm::default();
    for (cell, form) in &sd.forms {
        let c = cells
            .get(cell)
            .ok_or_else(|| bad(format!("unknown cell {cell}")))?;
        paradigm.cells.push((c.clone(), form.replace(' ', "_")));
    }
    if paradigm.cells.is_empty() {
        paradigm.cells.push((
            Cell {
                name: "base".into(),
                bundle: Vec::new(),
            },
            sd.orth.replace(' ', "_"),
        ));
    }
    Ok(LexicalSign {
        id: sd.id.clone(),
        orth: sd.orth.clone(),
        syn,
        qualia,
        lang: lang.clone(),
        sem,
        morph: Arc::new(paradigm),
        derivs: Arc::new(sd.derivs.iter().cloned().collect()),
    })
}

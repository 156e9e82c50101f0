//! Lexicalist transfer: bilexical entries, bi-lexical rules, total covers
//! of the source list and target bags.

mod bag;
mod cover;
mod rules;

use std::fmt;
use std::sync::Arc;

use crate::dsl::{EntryDecl, RefBase, SignRef, Stmt};
use crate::lingware::{term_from_decl, LexicalSign, Lexicon, LingwareError, SemTerm, Vocab};
use crate::tfs::{parse_path, FeatureStructure, TypeHierarchy};

pub use bag::build_tl_bag;
pub use cover::{cover, match_entry, match_sign, Binding, Cover, CoverOutcome, CoverPart};
pub use rules::{BiLexicalRule, RuleCondition};

/// Where an entry comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Static { line: usize },
    Derived { rule: String, parent: Arc<BilexEntry> },
}

/// Translationally equivalent sign lists. Variables are local to the entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilexEntry {
    pub sl: Vec<LexicalSign>,
    pub sl_context: Vec<LexicalSign>,
    pub tl: Vec<LexicalSign>,
    pub tl_context: Vec<LexicalSign>,
    pub origin: Origin,
}

impl BilexEntry {
    pub fn is_derived(&self) -> bool {
        matches!(self.origin, Origin::Derived { .. })
    }

    /// Same entry read in the opposite direction.
    pub fn reversed(&self) -> BilexEntry {
        BilexEntry {
            sl: self.tl.clone(),
            sl_context: self.tl_context.clone(),
            tl: self.sl.clone(),
            tl_context: self.sl_context.clone(),
            origin: self.origin.clone(),
        }
    }

    /// Equality of content, ignoring origin.
    pub fn same_content(&self, other: &BilexEntry) -> bool {
        self.sl == other.sl
            && self.sl_context == other.sl_context
            && self.tl == other.tl
            && self.tl_context == other.tl_context
    }

    /// Display with origin annotation, `... [rule <- parent]`.
    pub fn describe(&self) -> String {
        match &self.origin {
            Origin::Static { line } => format!("{self}  [static, line {line}]"),
            Origin::Derived { rule, parent } => format!("{self}  [{rule} <- {parent}]"),
        }
    }
}

fn side(f: &mut fmt::Formatter<'_>, signs: &[LexicalSign], ctx: &[LexicalSign]) -> fmt::Result {
    let s: Vec<String> = signs.iter().map(|s| s.short()).collect();
    write!(f, "{}", s.join(" "))?;
    if !ctx.is_empty() {
        let c: Vec<String> = ctx.iter().map(|s| format!("({})", s.short())).collect();
        write!(f, " | {}", c.join(" "))?;
    }
    Ok(())
}

impl fmt::Display for BilexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        side(f, &self.sl, &self.sl_context)?;
        write!(f, " <-> ")?;
        side(f, &self.tl, &self.tl_context)
    }
}

/// Applies `{path=type}` constraints of a sign reference.
pub(crate) fn constrain(
    h: &TypeHierarchy,
    sign: LexicalSign,
    constraints: &[(String, String)],
) -> Result<LexicalSign, String> {
    let mut s = sign;
    for (path, ty) in constraints {
        let t = h.type_id(ty).map_err(|e| e.to_string())?;
        let (head, rest) = path.split_once('.').unwrap_or((path.as_str(), ""));
        let p = parse_path(h, rest).map_err(|e| e.to_string())?;
        let v = FeatureStructure::atom(t);
        let updated = match head {
            "syn" => s.syn.with_value(h, &p, &v).map(|syn| LexicalSign { syn, ..s.clone() }),
            "qualia" => s.qualia.with_value(h, &p, &v).map(|qualia| LexicalSign { qualia, ..s.clone() }),
            other => return Err(format!("unknown path root {other}")),
        };
        s = updated.ok_or_else(|| format!("{} cannot take {path}={ty}", s.id))?;
    }
    Ok(s)
}

fn args_of(r: &SignRef) -> Vec<SemTerm> {
    r.args.iter().map(term_from_decl).collect()
}

/// Instantiates a lexeme reference against a lexicon.
pub fn lexeme_ref(h: &TypeHierarchy, lex: &Lexicon, r: &SignRef, line: usize) -> Result<LexicalSign, LingwareError> {
    let RefBase::Lexeme(id) = &r.base else {
        return Err(LingwareError::invalid(line, "rule variables are only allowed in birule blocks"));
    };
    let sign = lex
        .get(id)
        .ok_or_else(|| LingwareError::invalid(line, format!("unknown {} sign {id}", lex.lang())))?;
    let args = args_of(r);
    let sign = sign.with_index(&args).ok_or_else(|| {
        LingwareError::invalid(
            line,
            format!("{id} takes {} arguments, {} given", sign.index().len(), args.len()),
        )
    })?;
    constrain(h, sign, &r.constraints).map_err(|e| LingwareError::invalid(line, e))
}

fn refs(h: &TypeHierarchy, lex: &Lexicon, rs: &[SignRef], line: usize) -> Result<Vec<LexicalSign>, LingwareError> {
    rs.iter().map(|r| lexeme_ref(h, lex, r, line)).collect()
}

/// A bilingual lexicon with its bi-lexical rules. Entries are stored in the
/// authored direction, `left` to `right`.
#[derive(Clone, Debug)]
pub struct Bilexicon {
    pub left: crate::lingware::Lang,
    pub right: crate::lingware::Lang,
    pub entries: Vec<BilexEntry>,
    pub rules: Vec<BiLexicalRule>,
}

impl Bilexicon {
    pub fn from_stmts(
        h: &TypeHierarchy,
        left: &Lexicon,
        right: &Lexicon,
        stmts: &[Stmt],
    ) -> Result<Bilexicon, LingwareError> {
        let mut entries = Vec::new();
        let mut rules = Vec::new();
        for s in stmts {
            match s {
                Stmt::Bilex(e) => entries.push(static_entry(h, left, right, e)?),
                Stmt::Birule(b) => rules.push(BiLexicalRule::compile(h, left, right, b)?),
                _ => {}
            }
        }
        Ok(Bilexicon {
            left: left.lang().clone(),
            right: right.lang().clone(),
            entries,
            rules,
        })
    }

    /// Static entries oriented from `from`.
    pub fn oriented(&self, entries: &[BilexEntry], from: &crate::lingware::Lang) -> Vec<BilexEntry> {
        if *from == self.left {
            entries.to_vec()
        } else {
            entries.iter().map(BilexEntry::reversed).collect()
        }
    }

    /// Static entries plus everything the rules derive from them within
    /// `depth` rounds, in the authored direction. Each derived entry is
    /// reported once.
    pub fn expand(
        &self,
        h: &TypeHierarchy,
        vocab: &Vocab,
        left: &Lexicon,
        right: &Lexicon,
        depth: usize,
    ) -> Vec<BilexEntry> {
        let mut all = self.entries.clone();
        let mut frontier = self.entries.clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for e in &frontier {
                for r in &self.rules {
                    for d in r.apply(h, vocab, left, right, e) {
                        if !all.iter().any(|x| x.same_content(&d)) && !next.iter().any(|x: &BilexEntry| x.same_content(&d)) {
                            next.push(d);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }
}

fn static_entry(h: &TypeHierarchy, left: &Lexicon, right: &Lexicon, e: &EntryDecl) -> Result<BilexEntry, LingwareError> {
    let entry = BilexEntry {
        sl: refs(h, left, &e.sl, e.line)?,
        sl_context: refs(h, left, &e.sl_context, e.line)?,
        tl: refs(h, right, &e.tl, e.line)?,
        tl_context: refs(h, right, &e.tl_context, e.line)?,
        origin: Origin::Static { line: e.line },
    };
    if entry.sl.is_empty() && entry.tl.is_empty() {
        return Err(LingwareError::invalid(e.line, "entry translates nothing"));
    }
    Ok(entry)
}

/// Keeps the entries whose source signs, consumed and context, each unify
/// with some sign of `rep`.
pub fn relevant(h: &TypeHierarchy, entries: Vec<BilexEntry>, rep: &crate::parser::TransferRep) -> Vec<BilexEntry> {
    entries
        .into_iter()
        .filter(|e| {
            let fits = |p: &LexicalSign, ctx: bool| {
                rep.signs
                    .iter()
                    .any(|s| !match_sign(h, p, s, &crate::lingware::Subst::new(), ctx).is_empty())
            };
            e.sl.iter().all(|p| fits(p, false)) && e.sl_context.iter().all(|p| fits(p, true))
        })
        .collect()
}

/// Entries usable for `rep` when translating from `from`: static and
/// derived entries within `depth`, oriented and filtered for relevance.
#[allow(clippy::too_many_arguments)]
pub fn derive_entries(
    h: &TypeHierarchy,
    vocab: &Vocab,
    bilex: &Bilexicon,
    left: &Lexicon,
    right: &Lexicon,
    from: &crate::lingware::Lang,
    rep: &crate::parser::TransferRep,
    depth: usize,
) -> Vec<BilexEntry> {
    let all = bilex.expand(h, vocab, left, right, depth);
    relevant(h, bilex.oriented(&all, from), rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lingware::fixtures::*;
    use crate::lingware::Lang;

    #[test]
    fn expansion_derives_rule_entries() {
        let h = hierarchy();
        let vocab = Vocab::new(&h).unwrap();
        let en = lexicon(&h, ENGLISH);
        let es = lexicon(&h, SPANISH);
        let bl = bilexicon(&h, &en, &es);
        assert_eq!(bl.rules.len(), 5);
        let all = bl.expand(&h, &vocab, &en, &es, 2);
        let by_rule = |name: &str| {
            all.iter()
                .filter(|e| matches!(&e.origin, Origin::Derived { rule, .. } if rule == name))
                .count()
        };
        assert_eq!(by_rule("fruit-tree"), 6);
        assert_eq!(by_rule("support-verb"), 6);
        assert_eq!(by_rule("causative"), 1);
        let depth1 = bl.expand(&h, &vocab, &en, &es, 1);
        assert_eq!(depth1.len(), all.len());
        assert_eq!(bl.expand(&h, &vocab, &en, &es, 0).len(), bl.entries.len());
    }

    #[test]
    fn reversal_swaps_sides() {
        let h = hierarchy();
        let en = lexicon(&h, ENGLISH);
        let es = lexicon(&h, SPANISH);
        let bl = bilexicon(&h, &en, &es);
        let e = bl.entries.iter().find(|e| e.sl.len() == 1 && e.sl[0].id == "love1").unwrap();
        assert_eq!(e.reversed().to_string(), "amar1(e,x,y) a1(y) <-> love1(e,x,y)");
        assert_eq!(e.reversed().reversed(), *e);
        let back = bl.oriented(&bl.entries, &Lang::new("spanish"));
        assert!(back.iter().all(|e| e.sl.iter().all(|s| s.lang.as_str() == "spanish")));
    }

    #[test]
    fn unknown_lexeme_in_entry_is_rejected() {
        let h = hierarchy();
        let en = lexicon(&h, ENGLISH);
        let es = lexicon(&h, SPANISH);
        let stmts = crate::dsl::parse("bilex zebra1(x) <-> cebra1(x)\n").unwrap();
        let err = Bilexicon::from_stmts(&h, &en, &es, &stmts).unwrap_err();
        assert!(err.to_string().contains("zebra1"), "{err}");
    }
}

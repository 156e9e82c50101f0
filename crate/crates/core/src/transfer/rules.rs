//! Bi-lexical rules: from one bilexical entry to a derived entry.

use std::collections::HashMap;
use std::sync::Arc;

use super::{args_of, constrain, lexeme_ref, BilexEntry, Origin};
use crate::dsl::{BiruleDecl, EntryDecl, RefBase, Side, SignRef};
use crate::lingware::{
    apply_mono_rule, LexicalSign, Lexicon, LingwareError, MonoLexRule, MonoRuleKind, SemTerm, Subst, Vocab,
};
use crate::tfs::{parse_path, FeatId, TypeHierarchy, TypeId};

/// `when` condition: the Qualia or syn value at `path` of the sign bound to
/// `var` must be present and compatible with `ty`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleCondition {
    pub side: Side,
    pub var: String,
    pub in_qualia: bool,
    pub path: Vec<FeatId>,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiLexicalRule {
    pub name: String,
    input: EntryDecl,
    conditions: Vec<RuleCondition>,
    output: EntryDecl,
}

fn check_refs(rs: &[SignRef], line: usize, bound: &[String]) -> Result<(), LingwareError> {
    for r in rs {
        match &r.base {
            RefBase::Var(v) if !bound.contains(v) => {
                return Err(LingwareError::invalid(line, format!("unbound rule variable ${v}")))
            }
            RefBase::Transform { rule, var } => {
                if MonoRuleKind::from_name(rule).is_none() {
                    return Err(LingwareError::invalid(line, format!("unknown lexical rule {rule}")));
                }
                if !bound.contains(var) {
                    return Err(LingwareError::invalid(line, format!("unbound rule variable ${var}")));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn input_var(r: &[SignRef], line: usize) -> Result<String, LingwareError> {
    match r {
        [SignRef {
            base: RefBase::Var(v), ..
        }] => Ok(v.clone()),
        _ => Err(LingwareError::invalid(
            line,
            "a rule input side is a single $variable pattern",
        )),
    }
}

impl BiLexicalRule {
    pub fn compile(
        h: &TypeHierarchy,
        left: &Lexicon,
        right: &Lexicon,
        b: &BiruleDecl,
    ) -> Result<BiLexicalRule, LingwareError> {
        let line = b.line;
        if !b.input.sl_context.is_empty() || !b.input.tl_context.is_empty() {
            return Err(LingwareError::invalid(line, "rule inputs take no context"));
        }
        let sl_var = input_var(&b.input.sl, line)?;
        let tl_var = input_var(&b.input.tl, line)?;
        let out = &b.output;
        check_refs(&out.sl, line, std::slice::from_ref(&sl_var))?;
        check_refs(&out.sl_context, line, std::slice::from_ref(&sl_var))?;
        check_refs(&out.tl, line, std::slice::from_ref(&tl_var))?;
        check_refs(&out.tl_context, line, std::slice::from_ref(&tl_var))?;
        // Lexeme references are validated against the lexicons up front.
        for r in out.sl.iter().chain(&out.sl_context) {
            if matches!(r.base, RefBase::Lexeme(_)) {
                lexeme_ref(h, left, r, line)?;
            }
        }
        for r in out.tl.iter().chain(&out.tl_context) {
            if matches!(r.base, RefBase::Lexeme(_)) {
                lexeme_ref(h, right, r, line)?;
            }
        }
        let mut conditions = Vec::new();
        for c in &b.conds {
            let expected = match c.side {
                Side::Sl => &sl_var,
                Side::Tl => &tl_var,
            };
            if &c.var != expected {
                return Err(LingwareError::invalid(line, format!("condition on unknown ${}", c.var)));
            }
            let (head, rest) = c.path.split_once('.').unwrap_or((c.path.as_str(), ""));
            let in_qualia = match head {
                "qualia" => true,
                "syn" => false,
                other => return Err(LingwareError::invalid(line, format!("unknown path root {other}"))),
            };
            conditions.push(RuleCondition {
                side: c.side,
                var: c.var.clone(),
                in_qualia,
                path: parse_path(h, rest)?,
                ty: h.type_id(&c.ty)?,
            });
        }
        Ok(BiLexicalRule {
            name: b.name.clone(),
            input: b.input.clone(),
            conditions,
            output: b.output.clone(),
        })
    }

    fn condition_holds(&self, h: &TypeHierarchy, c: &RuleCondition, sign: &LexicalSign) -> bool {
        let fs = if c.in_qualia { &sign.qualia } else { &sign.syn };
        fs.type_at(&c.path).is_some_and(|t| h.glb(t, c.ty).is_some())
    }

    /// The derived entry for `entry`, if the rule applies. Rules apply to
    /// entries with exactly one sign per side and no context.
    pub fn apply(
        &self,
        h: &TypeHierarchy,
        vocab: &Vocab,
        left: &Lexicon,
        right: &Lexicon,
        entry: &BilexEntry,
    ) -> Vec<BilexEntry> {
        let ([sl], [tl]) = (entry.sl.as_slice(), entry.tl.as_slice()) else {
            return Vec::new();
        };
        if !entry.sl_context.is_empty() || !entry.tl_context.is_empty() {
            return Vec::new();
        }
        if sl.lang != *left.lang() || tl.lang != *right.lang() {
            return Vec::new();
        }
        let (sl_pat, tl_pat) = (&self.input.sl[0], &self.input.tl[0]);
        let (sl_args, tl_args) = (args_of(sl_pat), args_of(tl_pat));
        let (sl_idx, tl_idx) = (sl.index(), tl.index());
        if sl_args.len() != sl_idx.len() || tl_args.len() != tl_idx.len() {
            return Vec::new();
        }
        // The pattern's argument sharing must hold in the entry.
        let mut links = Subst::new();
        let pairs = sl_args.iter().zip(&sl_idx).chain(tl_args.iter().zip(&tl_idx));
        for (pat, actual) in pairs {
            let SemTerm::Var(v) = pat else { return Vec::new() };
            match links.get(v) {
                Some(prev) if prev != actual => return Vec::new(),
                Some(_) => {}
                None => links.bind(v, actual.clone()),
            }
        }
        for c in &self.conditions {
            let sign = if c.side == Side::Sl { sl } else { tl };
            if !self.condition_holds(h, c, sign) {
                return Vec::new();
            }
        }
        let mut bound: HashMap<&str, &LexicalSign> = HashMap::new();
        bound.insert(input_name(sl_pat), sl);
        bound.insert(input_name(tl_pat), tl);
        let build = |refs: &[SignRef], lex: &Lexicon| -> Option<Vec<LexicalSign>> {
            refs.iter()
                .map(|r| output_sign(h, vocab, lex, r, &bound))
                .collect()
        };
        let (Some(o_sl), Some(o_slc), Some(o_tl), Some(o_tlc)) = (
            build(&self.output.sl, left),
            build(&self.output.sl_context, left),
            build(&self.output.tl, right),
            build(&self.output.tl_context, right),
        ) else {
            return Vec::new();
        };
        vec![BilexEntry {
            sl: o_sl,
            sl_context: o_slc,
            tl: o_tl,
            tl_context: o_tlc,
            origin: Origin::Derived {
                rule: self.name.clone(),
                parent: Arc::new(entry.clone()),
            },
        }]
    }
}

fn input_name(r: &SignRef) -> &str {
    match &r.base {
        RefBase::Var(v) => v,
        _ => unreachable!("checked at compile time"),
    }
}

fn output_sign(
    h: &TypeHierarchy,
    vocab: &Vocab,
    lex: &Lexicon,
    r: &SignRef,
    bound: &HashMap<&str, &LexicalSign>,
) -> Option<LexicalSign> {
    let args = args_of(r);
    let base = match &r.base {
        RefBase::Lexeme(id) => lex.get(id)?.clone(),
        RefBase::Var(v) => (*bound.get(v.as_str())?).clone(),
        RefBase::Transform { rule, var } => {
            let kind = MonoRuleKind::from_name(rule)?;
            let input = bound.get(var.as_str())?;
            apply_mono_rule(h, vocab, &MonoLexRule::new(kind), input, lex)
                .into_iter()
                .next()?
        }
    };
    let sign = if args.is_empty() { base } else { base.with_index(&args)? };
    constrain(h, sign, &r.constraints).ok()
}

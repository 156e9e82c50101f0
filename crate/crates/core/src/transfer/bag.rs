//! Target bags from covers.

use std::collections::BTreeMap;

use super::{BilexEntry, Cover};
use crate::lingware::{LexicalSign, SemPredicate, SemTerm, Subst, Vocab};
use crate::parser::TransferRep;
use crate::tfs::{unify, FeatId, FeatureStructure, TypeHierarchy, TypeId};

/// Value of `feat` when it is fully specified (a leaf type).
fn specified(h: &TypeHierarchy, fs: &FeatureStructure, feat: FeatId) -> Option<TypeId> {
    fs.type_at(&[feat]).filter(|&t| h.is_leaf(t))
}

fn set(h: &TypeHierarchy, sign: &mut LexicalSign, feat: FeatId, ty: TypeId) {
    if let Some(syn) = sign.syn.with_value(h, &[feat], &FeatureStructure::atom(ty)) {
        sign.syn = syn;
    }
}

/// Instantiates a tl sign: bound variables by the cover binding, the rest
/// by fresh constants.
fn ground(sign: &LexicalSign, subst: &Subst, fresh: &mut BTreeMap<String, u32>, next: &mut u32) -> LexicalSign {
    sign.apply(subst).map_vars(|v| {
        let c = *fresh.entry(v.to_string()).or_insert_with(|| {
            *next += 1;
            *next - 1
        });
        SemTerm::Const(c)
    })
}

/// Merges a target context sign into a bag element contributed by another
/// entry. Predicates are unified by name; context predicates missing from
/// the element are added in front of it.
fn merge_context(h: &TypeHierarchy, ctx: &LexicalSign, elem: &LexicalSign, vform: Option<FeatId>) -> Option<LexicalSign> {
    if ctx.id != elem.id || ctx.lang != elem.lang {
        return None;
    }
    let ctx_syn = match vform {
        Some(f) => ctx.syn.without(&[f]),
        None => ctx.syn.clone(),
    };
    let syn = unify(h, &ctx_syn, &elem.syn)?;
    let qualia = unify(h, &ctx.qualia, &elem.qualia)?;
    let mut subst = Subst::new();
    let mut used = vec![false; elem.sem.len()];
    let mut shared = false;
    for p in &ctx.sem {
        let hit = elem.sem.iter().enumerate().find(|(i, q)| {
            !used[*i] && q.name == p.name && q.args.len() == p.args.len() && {
                let mut s = subst.clone();
                p.args.iter().zip(&q.args).all(|(a, b)| s.unify(a, b))
            }
        });
        if let Some((i, q)) = hit {
            for (a, b) in p.args.iter().zip(&q.args) {
                subst.unify(a, b);
            }
            used[i] = true;
            shared = true;
        }
    }
    if !shared {
        return None;
    }
    let mut sem: Vec<SemPredicate> = ctx.sem.iter().map(|p| subst.apply_pred(p)).collect();
    if sem.iter().any(|p| p.args.iter().any(|a| !a.is_ground())) {
        return None;
    }
    for (i, q) in elem.sem.iter().enumerate() {
        if !used[i] {
            sem.push(q.clone());
        }
    }
    Some(LexicalSign {
        syn,
        qualia,
        sem,
        ..elem.clone()
    })
}

/// The union of the instantiated target sides of the cover's entries.
/// Tense passes from the source to target verbs lacking it, agreement from
/// a source noun to the target noun whose first index unifies with its own. Target context
/// signs constrain elements contributed by other entries.
pub fn build_tl_bag(
    h: &TypeHierarchy,
    vocab: &Vocab,
    rep: &TransferRep,
    entries: &[BilexEntry],
    cover: &Cover,
) -> Result<Vec<LexicalSign>, String> {
    let mut next = rep.max_constant() + 1;
    let sentence_tense = rep.signs.iter().find_map(|s| specified(h, &s.syn, vocab.tense));
    let mut bag: Vec<(usize, LexicalSign)> = Vec::new();
    for (k, part) in cover.parts.iter().enumerate() {
        let entry = &entries[part.entry];
        let mut fresh = BTreeMap::new();
        let tense = part
            .positions
            .iter()
            .chain(&part.context)
            .find_map(|&p| specified(h, &rep.signs[p].syn, vocab.tense))
            .or(sentence_tense);
        for t in &entry.tl {
            let mut s = ground(t, &part.subst, &mut fresh, &mut next);
            if vocab.is_verb(h, s.syn_type()) && specified(h, &s.syn, vocab.tense).is_none() {
                if let Some(tense) = tense {
                    set(h, &mut s, vocab.tense, tense);
                }
            }
            if vocab.is_noun(h, s.syn_type()) && specified(h, &s.syn, vocab.agr).is_none() {
                let first = s.index().first().cloned();
                let agr = rep.signs.iter().find_map(|r| {
                    let same = match (r.index().first(), first.as_ref()) {
                        (Some(a), Some(b)) => crate::lingware::Subst::new().unify(a, b),
                        _ => false,
                    };
                    (vocab.is_noun(h, r.syn_type()) && same)
                        .then(|| specified(h, &r.syn, vocab.agr))
                        .flatten()
                });
                if let Some(agr) = agr {
                    set(h, &mut s, vocab.agr, agr);
                }
            }
            bag.push((k, s));
        }
    }
    for (k, part) in cover.parts.iter().enumerate() {
        for c in &entries[part.entry].tl_context {
            let ctx = c.apply(&part.subst);
            let hit = bag
                .iter()
                .enumerate()
                .filter(|(_, (owner, _))| *owner != k)
                .find_map(|(i, (_, e))| merge_context(h, &ctx, e, Some(vocab.vform)).map(|m| (i, m)));
            match hit {
                Some((i, merged)) => bag[i].1 = merged,
                None => return Err(format!("target context {} is not satisfied", ctx.short())),
            }
        }
    }
    Ok(bag.into_iter().map(|(_, s)| s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lingware::fixtures::*;
    use crate::lingware::{Lang, Lexicon, SemPredicate, SemTerm};
    use crate::tfs::{parse_path, FeatureStructure};
    use crate::transfer::{cover, relevant};

    fn setup() -> (TypeHierarchy, Vocab, Lexicon, Vec<BilexEntry>) {
        let h = hierarchy();
        let vocab = Vocab::new(&h).unwrap();
        let en = lexicon(&h, ENGLISH);
        let es = lexicon(&h, SPANISH);
        let bl = bilexicon(&h, &en, &es);
        let all = bl.expand(&h, &vocab, &en, &es, 2);
        let entries = bl.oriented(&all, &Lang::new("english"));
        (h, vocab, en, entries)
    }

    fn sems(bag: &[LexicalSign]) -> String {
        let parts: Vec<String> = bag
            .iter()
            .flat_map(|s| s.sem.iter().map(|p| p.to_string()))
            .collect();
        parts.join(" ")
    }

    fn first_bag(h: &TypeHierarchy, vocab: &Vocab, rep: &TransferRep, entries: Vec<BilexEntry>) -> Vec<LexicalSign> {
        let entries = relevant(h, entries, rep);
        let out = cover(h, rep, &entries);
        build_tl_bag(h, vocab, rep, &entries, &out.covers[0]).unwrap()
    }

    fn tense(h: &TypeHierarchy, s: &LexicalSign) -> Option<String> {
        s.syn.type_at(&parse_path(h, "tense").unwrap()).map(|t| h.type_name(t).to_string())
    }

    #[test]
    fn idiom_bag_is_the_target_side() {
        let (h, vocab, _, entries) = setup();
        let rep = rep(&h, ENGLISH, "John kicked the bucket");
        let bag = first_bag(&h, &vocab, &rep, entries);
        assert_eq!(sems(&bag), "juan1(1) estirar1(2,1,3) la1(3) pata1(3)");
        assert_eq!(tense(&h, &bag[1]), Some("past".to_string()));
    }

    #[test]
    fn head_switch_bag_uses_the_worked_constants() {
        let (h, vocab, en, entries) = setup();
        let sign = |id: &str, args: &[u32], t: Option<&str>| {
            let mut s = en.get(id).unwrap().clone();
            s.sem = vec![SemPredicate::new(id, args.iter().map(|&c| SemTerm::Const(c)).collect())];
            if let Some(t) = t {
                let v = FeatureStructure::atom(h.type_id(t).unwrap());
                s.syn = s.syn.with_value(&h, &parse_path(&h, "tense").unwrap(), &v).unwrap();
            }
            s
        };
        let rep = TransferRep {
            signs: vec![
                sign("mary1", &[1], None),
                sign("think1", &[2, 1, 4], Some("pres")),
                sign("john1", &[3], None),
                sign("just1", &[4], None),
                sign("arrive1", &[4, 3], Some("past")),
            ],
            skolemized: true,
        };
        let bag = first_bag(&h, &vocab, &rep, entries);
        assert_eq!(
            sems(&bag),
            "maría1(1) pensar_que1(2,1,4) juan1(3) acabar_de1(4,3,4) llegar1(4,3)"
        );
        assert_eq!(tense(&h, &bag[3]), Some("pres".to_string()));
    }

    #[test]
    fn target_only_variable_gets_a_fresh_constant() {
        let (h, vocab, _, entries) = setup();
        let rep = rep(&h, ENGLISH, "John stabbed Mary");
        let bag = first_bag(&h, &vocab, &rep, entries);
        assert_eq!(sems(&bag), "juan1(1) dar1(2,1,4,3) le1(3) puñalada1(4) a1(3) maría1(3)");
    }

    #[test]
    fn context_merges_into_the_verb() {
        let (h, vocab, _, entries) = setup();
        let rep = rep(&h, ENGLISH, "John marched the soldiers");
        let entries = relevant(&h, entries, &rep);
        let out = cover(&h, &rep, &entries);
        let c = out
            .covers
            .iter()
            .find(|c| c.parts.iter().any(|p| entries[p.entry].tl_context.len() == 1))
            .unwrap();
        let bag = build_tl_bag(&h, &vocab, &rep, &entries, c).unwrap();
        let marchar = bag.iter().find(|s| s.id == "marchar1").unwrap();
        let vform = marchar.syn.type_at(&parse_path(&h, "vform").unwrap());
        // vform is left for the target grammar to fix.
        assert_eq!(vform, None);
        assert_eq!(marchar.sem[0].to_string(), "marchar1(2,3)");
        assert!(bag.iter().any(|s| s.id == "hacer1"));
    }

    #[test]
    fn empty_cover_gives_empty_bag() {
        let (h, vocab, _, entries) = setup();
        let rep = TransferRep::new(Vec::new());
        let bag = build_tl_bag(&h, &vocab, &rep, &entries, &Cover { parts: Vec::new() }).unwrap();
        assert!(bag.is_empty());
    }
}

//! Matching entries against the source list and enumerating total covers.

use std::cmp::Ordering;

use super::BilexEntry;
use crate::lingware::{LexicalSign, SemPredicate, Subst};
use crate::parser::TransferRep;
use crate::tfs::{unify, TypeHierarchy};

/// Removes the inflectional form feature, which context matching ignores.
fn without_vform(h: &TypeHierarchy, s: &crate::tfs::FeatureStructure) -> crate::tfs::FeatureStructure {
    match h.feature_id("vform") {
        Ok(f) => s.without(&[f]),
        Err(_) => s.clone(),
    }
}

fn sem_subset(pat: &[SemPredicate], target: &[SemPredicate], used: &mut Vec<bool>, subst: Subst, out: &mut Vec<Subst>) {
    let Some((first, rest)) = pat.split_first() else {
        if !out.contains(&subst) {
            out.push(subst);
        }
        return;
    };
    for (i, t) in target.iter().enumerate() {
        if used[i] || t.name != first.name || t.args.len() != first.args.len() {
            continue;
        }
        let mut s = subst.clone();
        if first.args.iter().zip(&t.args).all(|(a, b)| s.unify(a, b)) {
            used[i] = true;
            sem_subset(rest, target, used, s, out);
            used[i] = false;
        }
    }
}

/// All extensions of `subst` under which pattern `pat` matches source sign
/// `sign`: same lexeme and language, unifiable syn and Qualia, and every
/// pattern predicate unifying with a distinct predicate of the sign. In
/// `context` mode vform is ignored.
pub fn match_sign(h: &TypeHierarchy, pat: &LexicalSign, sign: &LexicalSign, subst: &Subst, context: bool) -> Vec<Subst> {
    if pat.id != sign.id || pat.lang != sign.lang {
        return Vec::new();
    }
    let syn_ok = if context {
        unify(h, &without_vform(h, &pat.syn), &without_vform(h, &sign.syn)).is_some()
    } else {
        unify(h, &pat.syn, &sign.syn).is_some()
    };
    if !syn_ok || unify(h, &pat.qualia, &sign.qualia).is_none() {
        return Vec::new();
    }
    let mut out = Vec::new();
    sem_subset(&pat.sem, &sign.sem, &mut vec![false; sign.sem.len()], subst.clone(), &mut out);
    out
}

/// A way of matching an entry's source signs to rep positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    /// Position of each consumed source sign, in entry order.
    pub positions: Vec<usize>,
    pub subst: Subst,
}

#[allow(clippy::too_many_arguments)]
fn assign(
    h: &TypeHierarchy,
    pats: &[LexicalSign],
    rep: &TransferRep,
    allowed: &dyn Fn(usize) -> bool,
    distinct: bool,
    context: bool,
    chosen: &mut Vec<usize>,
    subst: Subst,
    out: &mut Vec<Binding>,
) {
    let Some((first, rest)) = pats.split_first() else {
        out.push(Binding {
            positions: chosen.clone(),
            subst,
        });
        return;
    };
    for (p, sign) in rep.signs.iter().enumerate() {
        if !allowed(p) || (distinct && chosen.contains(&p)) {
            continue;
        }
        for s in match_sign(h, first, sign, &subst, context) {
            chosen.push(p);
            assign(h, rest, rep, allowed, distinct, context, chosen, s, out);
            chosen.pop();
        }
    }
}

/// All one-to-one matchings of `entry`'s consumed source signs onto exactly
/// the given positions.
pub fn match_entry(h: &TypeHierarchy, entry: &BilexEntry, rep: &TransferRep, positions: &[usize]) -> Vec<Binding> {
    if entry.sl.len() != positions.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    assign(
        h,
        &entry.sl,
        rep,
        &|p| positions.contains(&p),
        true,
        false,
        &mut Vec::new(),
        Subst::new(),
        &mut out,
    );
    out
}

/// One entry instance in a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPart {
    /// Index into the entry list given to [`cover`].
    pub entry: usize,
    /// Consumed positions, in entry order.
    pub positions: Vec<usize>,
    /// Positions matched by the entry's source context signs.
    pub context: Vec<usize>,
    pub subst: Subst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub parts: Vec<CoverPart>,
}

impl Cover {
    /// The part consuming each position.
    pub fn assignment(&self, len: usize) -> Vec<Option<usize>> {
        let mut a = vec![None; len];
        for (i, p) in self.parts.iter().enumerate() {
            for &pos in &p.positions {
                a[pos] = Some(i);
            }
        }
        a
    }

    pub fn derived_count(&self, entries: &[BilexEntry]) -> usize {
        self.parts.iter().filter(|p| entries[p.entry].is_derived()).count()
    }

    pub fn summary(&self, entries: &[BilexEntry]) -> String {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| format!("[{}]", entries[p.entry]))
            .collect();
        parts.join(" ")
    }

    fn key(&self, entries: &[BilexEntry]) -> CoverKey {
        (
            self.parts.len(),
            self.derived_count(entries),
            self.parts
                .iter()
                .map(|p| (p.positions.clone(), p.context.clone(), entries[p.entry].to_string()))
                .collect(),
        )
    }
}

type CoverKey = (usize, usize, Vec<(Vec<usize>, Vec<usize>, String)>);

/// Orders covers: fewer entries, then fewer derived entries, then
/// lexicographically.
pub fn compare_covers(a: &Cover, b: &Cover, entries: &[BilexEntry]) -> Ordering {
    a.key(entries).cmp(&b.key(entries))
}

#[derive(Clone, Debug, Default)]
pub struct CoverOutcome {
    pub covers: Vec<Cover>,
    pub diagnostic: Option<String>,
}

fn exact(
    instances: &[(usize, Binding)],
    used: &mut Vec<bool>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(chosen.clone());
        return;
    };
    for (k, (_, b)) in instances.iter().enumerate() {
        if !b.positions.contains(&first) || b.positions.iter().any(|&p| used[p]) {
            continue;
        }
        for &p in &b.positions {
            used[p] = true;
        }
        chosen.push(k);
        exact(instances, used, chosen, out);
        chosen.pop();
        for &p in &b.positions {
            used[p] = false;
        }
    }
}

/// Binds an instance's source context signs to positions it does not
/// consume itself.
pub(crate) fn context_bindings(h: &TypeHierarchy, entry: &BilexEntry, rep: &TransferRep, own: &[usize], subst: &Subst) -> Vec<Binding> {
    let mut out = Vec::new();
    assign(
        h,
        &entry.sl_context,
        rep,
        &|p| !own.contains(&p),
        false,
        true,
        &mut Vec::new(),
        subst.clone(),
        &mut out,
    );
    out
}

/// Adds the optional context-only parts to `base` in every combination.
pub(crate) fn with_optional(base: Vec<CoverPart>, optional: &[CoverPart]) -> Vec<Cover> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << optional.len()) {
        let mut parts = base.clone();
        for (i, o) in optional.iter().enumerate() {
            if mask & (1 << i) != 0 {
                parts.push(o.clone());
            }
        }
        out.push(Cover { parts });
    }
    out
}

/// Context-only entries (no consumed source signs) as optional parts.
pub(crate) fn optional_parts(h: &TypeHierarchy, entries: &[BilexEntry], rep: &TransferRep) -> Vec<CoverPart> {
    let mut out: Vec<CoverPart> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if !e.sl.is_empty() || e.sl_context.is_empty() {
            continue;
        }
        for b in context_bindings(h, e, rep, &[], &Subst::new()) {
            let part = CoverPart {
                entry: i,
                positions: Vec::new(),
                context: b.positions,
                subst: b.subst,
            };
            if !out.contains(&part) {
                out.push(part);
            }
        }
    }
    out
}

/// Expands each consumed part by its context bindings.
pub(crate) fn resolve_contexts(
    h: &TypeHierarchy,
    entries: &[BilexEntry],
    rep: &TransferRep,
    parts: &[(usize, Binding)],
) -> Vec<Vec<CoverPart>> {
    let mut acc: Vec<Vec<CoverPart>> = vec![Vec::new()];
    for (e, b) in parts {
        let entry = &entries[*e];
        let options: Vec<CoverPart> = if entry.sl_context.is_empty() {
            vec![CoverPart {
                entry: *e,
                positions: b.positions.clone(),
                context: Vec::new(),
                subst: b.subst.clone(),
            }]
        } else {
            context_bindings(h, entry, rep, &b.positions, &b.subst)
                .into_iter()
                .map(|c| CoverPart {
                    entry: *e,
                    positions: b.positions.clone(),
                    context: c.positions,
                    subst: c.subst,
                })
                .collect()
        };
        let mut next = Vec::new();
        for prefix in &acc {
            for o in &options {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}

/// All exact covers of `rep` by `entries`, ordered.
pub fn cover(h: &TypeHierarchy, rep: &TransferRep, entries: &[BilexEntry]) -> CoverOutcome {
    let n = rep.len();
    let mut instances: Vec<(usize, Binding)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if e.sl.is_empty() {
            continue;
        }
        let mut bs = Vec::new();
        assign(h, &e.sl, rep, &|_| true, true, false, &mut Vec::new(), Subst::new(), &mut bs);
        instances.extend(bs.into_iter().map(|b| (i, b)));
    }
    let mut out = CoverOutcome::default();
    if n == 0 {
        out.covers.push(Cover { parts: Vec::new() });
        return out;
    }
    let mut exacts = Vec::new();
    exact(&instances, &mut vec![false; n], &mut Vec::new(), &mut exacts);
    let optional = optional_parts(h, entries, rep);
    for choice in exacts {
        let parts: Vec<(usize, Binding)> = choice.iter().map(|&k| instances[k].clone()).collect();
        for base in resolve_contexts(h, entries, rep, &parts) {
            out.covers.extend(with_optional(base, &optional));
        }
    }
    for c in &mut out.covers {
        c.parts.sort_by(|a, b| {
            (a.positions.is_empty(), &a.positions, &a.context, a.entry).cmp(&(
                b.positions.is_empty(),
                &b.positions,
                &b.context,
                b.entry,
            ))
        });
    }
    out.covers.sort_by(|a, b| compare_covers(a, b, entries));
    out.covers.dedup();
    if out.covers.is_empty() {
        let mut coverable = vec![false; n];
        for (_, b) in &instances {
            for &p in &b.positions {
                coverable[p] = true;
            }
        }
        let missing: Vec<String> = (0..n)
            .filter(|&p| !coverable[p])
            .map(|p| format!("{p}:{}", rep.signs[p].short()))
            .collect();
        out.diagnostic = Some(if missing.is_empty() {
            "no total cover; every position matches some entry but no combination partitions the list".into()
        } else {
            format!("no total cover; uncovered positions {}", missing.join(", "))
        });
    }
    out
}

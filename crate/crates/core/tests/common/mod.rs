//! Shared fixtures, random generators and brute-force oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use bilex::generator::{brute_force_generate, generate, realize};
use bilex::lingware::{LexicalSign, Lexicon, SemPredicate, SemTerm, Subst};
use bilex::parser::{Grammar, TransferRep};
use bilex::session::{Lingware, OutputMode, Session, SessionConfig};
use bilex::tfs::{FeatureStructure, NodeId, TypeHierarchy, TypeId, Workspace};
use bilex::transfer::{cover, match_entry, match_sign, BilexEntry};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

pub fn lingware_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("lingware")
}

pub fn lingware() -> Lingware {
    Lingware::load(&lingware_dir()).unwrap()
}

pub fn session<'a>(lw: &'a Lingware, from: &str, to: &str) -> Session<'a> {
    let mut cfg = SessionConfig::new(from, to, lingware_dir());
    cfg.mode = OutputMode::All;
    Session::new(lw, cfg).unwrap()
}

/// A random well-typed structure over the declared types, with occasional
/// reentrancy.
pub fn random_fs(h: &TypeHierarchy, rng: &mut impl Rng, depth: usize) -> FeatureStructure {
    let types: Vec<TypeId> = h.declared_types().collect();
    let mut ws = Workspace::new();
    let mut done = Vec::new();
    let ty = *types.choose(rng).unwrap();
    let root = grow(h, &mut ws, rng, ty, depth, &types, &mut done);
    FeatureStructure::from_graph(ws.extract(&[root]).unwrap())
}

fn grow(
    h: &TypeHierarchy,
    ws: &mut Workspace,
    rng: &mut impl Rng,
    ty: TypeId,
    depth: usize,
    types: &[TypeId],
    done: &mut Vec<NodeId>,
) -> NodeId {
    let n = ws.new_node(ty);
    if depth > 0 {
        let feats: Vec<_> = h.appropriate_features(ty).iter().map(|(&f, &c)| (f, c)).collect();
        for (f, c) in feats {
            if !rng.gen_bool(0.6) {
                continue;
            }
            if rng.gen_bool(0.2) {
                if let Some(&m) = done.iter().filter(|&&m| h.subsumes(c, ws.type_of(m))).choose(rng) {
                    ws.set_raw(n, f, m);
                    continue;
                }
            }
            let t = types.iter().copied().filter(|&t| h.subsumes(c, t)).choose(rng).unwrap();
            let child = grow(h, ws, rng, t, depth - 1, types, done);
            ws.set_raw(n, f, child);
        }
    }
    done.push(n);
    n
}

/// Greatest lower bound from down-sets: the common subtype subsuming every
/// other common subtype.
pub fn glb_oracle(h: &TypeHierarchy, a: TypeId, b: TypeId) -> Option<TypeId> {
    let common: Vec<TypeId> = h.types().filter(|&t| h.subsumes(a, t) && h.subsumes(b, t)).collect();
    common.iter().copied().find(|&g| common.iter().all(|&t| h.subsumes(g, t)))
}

/// A cover reduced to its consuming parts: `(entry, positions)` sorted.
pub type CoverKey = Vec<(usize, Vec<usize>)>;

pub fn cover_keys(h: &TypeHierarchy, rep: &TransferRep, entries: &[BilexEntry]) -> BTreeSet<CoverKey> {
    cover(h, rep, entries)
        .covers
        .iter()
        .map(|c| {
            let mut k: CoverKey = c
                .parts
                .iter()
                .filter(|p| !p.positions.is_empty())
                .map(|p| (p.entry, p.positions.clone()))
                .collect();
            k.sort();
            k
        })
        .collect()
}

/// Covers by enumerating every set partition of the positions and every
/// entry binding of each block.
pub fn partition_oracle(h: &TypeHierarchy, rep: &TransferRep, entries: &[BilexEntry]) -> BTreeSet<CoverKey> {
    let mut out = BTreeSet::new();
    partitions(h, rep, entries, &mut vec![false; rep.len()], &mut Vec::new(), &mut out);
    out
}

fn partitions(
    h: &TypeHierarchy,
    rep: &TransferRep,
    entries: &[BilexEntry],
    used: &mut Vec<bool>,
    parts: &mut CoverKey,
    out: &mut BTreeSet<CoverKey>,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        let mut k = parts.clone();
        k.sort();
        out.insert(k);
        return;
    };
    let rest: Vec<usize> = (first + 1..rep.len()).filter(|&p| !used[p]).collect();
    for mask in 0u32..(1 << rest.len()) {
        let mut block = vec![first];
        block.extend(rest.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p));
        for (i, e) in entries.iter().enumerate() {
            if e.sl.len() != block.len() {
                continue;
            }
            let mut seen = BTreeSet::new();
            for b in match_entry(h, e, rep, &block) {
                if !context_ok(h, e, rep, &b.positions, &b.subst, 0) || !seen.insert(b.positions.clone()) {
                    continue;
                }
                for &p in &block {
                    used[p] = true;
                }
                parts.push((i, b.positions.clone()));
                partitions(h, rep, entries, used, parts, out);
                parts.pop();
                for &p in &block {
                    used[p] = false;
                }
            }
        }
    }
}

fn context_ok(h: &TypeHierarchy, e: &BilexEntry, rep: &TransferRep, own: &[usize], subst: &Subst, i: usize) -> bool {
    let Some(ctx) = e.sl_context.get(i) else {
        return true;
    };
    (0..rep.len())
        .filter(|p| !own.contains(p))
        .any(|p| match_sign(h, ctx, &rep.signs[p], subst, true).into_iter().any(|s| context_ok(h, e, rep, own, &s, i + 1)))
}

/// Grounds every variable of `signs` to a constant drawn from `1..=pool`.
pub fn ground_randomly(signs: &[LexicalSign], rng: &mut impl Rng, pool: u32) -> Vec<LexicalSign> {
    let mut vars = Vec::new();
    for s in signs {
        for p in &s.sem {
            for a in &p.args {
                a.vars(&mut vars);
            }
        }
    }
    let mut subst = Subst::new();
    for v in vars {
        subst.unify(&SemTerm::var(&v), &SemTerm::Const(rng.gen_range(1..=pool)));
    }
    signs.iter().map(|s| s.apply(&subst)).collect()
}

/// A shuffled rep of at most `max_len` signs built from source sides of
/// random entries, grounded over a small constant pool so that linking
/// sometimes succeeds and sometimes fails.
pub fn random_rep(rng: &mut impl Rng, entries: &[BilexEntry], noise: &[LexicalSign], max_len: usize) -> TransferRep {
    let target = rng.gen_range(1..=max_len);
    let mut signs = Vec::new();
    let consuming: Vec<&BilexEntry> = entries.iter().filter(|e| !e.sl.is_empty()).collect();
    for _ in 0..20 {
        if signs.len() >= target {
            break;
        }
        if rng.gen_bool(0.1) && !noise.is_empty() {
            let s = noise.choose(rng).unwrap();
            signs.extend(ground_randomly(std::slice::from_ref(s), rng, 4));
            continue;
        }
        let e = consuming.choose(rng).unwrap();
        if signs.len() + e.sl.len() > max_len {
            continue;
        }
        signs.extend(ground_randomly(&e.sl, rng, 4));
    }
    signs.truncate(max_len);
    signs.shuffle(rng);
    TransferRep {
        signs,
        skolemized: true,
    }
}

fn map_consts(t: &SemTerm, f: &BTreeMap<u32, u32>) -> SemTerm {
    match t {
        SemTerm::Const(c) => SemTerm::Const(*f.get(c).unwrap_or(c)),
        SemTerm::Join(ts) => SemTerm::Join(ts.iter().map(|x| map_consts(x, f)).collect()),
        v => v.clone(),
    }
}

fn rename(s: &LexicalSign, f: &BTreeMap<u32, u32>) -> LexicalSign {
    LexicalSign {
        sem: s
            .sem
            .iter()
            .map(|p| SemPredicate::new(&p.name, p.args.iter().map(|a| map_consts(a, f)).collect()))
            .collect(),
        ..s.clone()
    }
}

fn constants(bag: &[LexicalSign]) -> Vec<u32> {
    let mut cs = Vec::new();
    for s in bag {
        for p in &s.sem {
            for a in &p.args {
                a.constants(&mut cs);
            }
        }
    }
    cs.sort();
    cs.dedup();
    cs
}

/// A bag of at most 8 signs: a perturbed golden bag, or random lexicon
/// signs over a few constants.
pub fn random_bag(rng: &mut impl Rng, golden: &[Vec<LexicalSign>], lex: &Lexicon) -> Vec<LexicalSign> {
    let mut bag: Vec<LexicalSign> = if rng.gen_bool(0.75) {
        golden.choose(rng).unwrap().clone()
    } else {
        let signs = lex.signs();
        (0..rng.gen_range(1..=5))
            .flat_map(|_| ground_randomly(std::slice::from_ref(signs.choose(rng).unwrap()), rng, 3))
            .collect()
    };
    let cs = constants(&bag);
    for _ in 0..rng.gen_range(0..=2) {
        match rng.gen_range(0..5) {
            0 if bag.len() > 1 => {
                let i = rng.gen_range(0..bag.len());
                bag.remove(i);
            }
            1 if !cs.is_empty() => {
                let mut image = cs.clone();
                image.shuffle(rng);
                let f: BTreeMap<u32, u32> = cs.iter().copied().zip(image).collect();
                let i = rng.gen_range(0..bag.len());
                bag[i] = rename(&bag[i], &f);
            }
            2 => {
                let i = rng.gen_range(0..bag.len());
                bag.push(bag[i].clone());
            }
            3 => {
                let s = lex.signs().choose(rng).unwrap();
                let pool = cs.iter().copied().max().unwrap_or(3);
                bag.extend(ground_randomly(std::slice::from_ref(s), rng, pool));
            }
            _ => {}
        }
    }
    bag.truncate(8);
    bag.shuffle(rng);
    bag
}

/// Realized strings from the chart generator and from the permutation
/// oracle.
pub fn both_generators(h: &TypeHierarchy, g: &Grammar, bag: &[LexicalSign]) -> (BTreeSet<String>, BTreeSet<String>) {
    let chart: BTreeSet<String> = generate(h, g, bag, false)
        .sequences
        .iter()
        .filter_map(|s| realize(h, &s.signs).ok())
        .collect();
    let oracle: BTreeSet<String> = brute_force_generate(h, g, bag, bag.len().max(1))
        .unwrap()
        .iter()
        .filter_map(|s| realize(h, &s.signs).ok())
        .collect();
    (chart, oracle)
}

/// Translations that appear as worked examples and in the timing table.
pub const GOLDEN: [(&str, &str, bool); 8] = [
    ("John likes Mary", "Juan ama a María", false),
    ("John kicked the bucket", "Juan estiró la pata", false),
    ("John is thirsty", "Juan tiene sed", false),
    ("Mary thinks John just arrived", "María piensa que Juan acaba de llegar", true),
    ("John thinks Mary just arrived", "Juan piensa que María acaba de llegar", false),
    ("John swam across the river", "Juan cruzó el río nadando", false),
    ("John marched the soldiers", "Juan hizo marchar a los soldados", false),
    ("John marched the soldiers across the valley", "", false),
];

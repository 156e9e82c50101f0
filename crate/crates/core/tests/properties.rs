mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use bilex::lingware::{synthesize, Lang, SemTerm};
use bilex::parser::{skolemize, TransferRep};
use bilex::session::Lingware;
use bilex::tfs::{subsumes, unify, FeatureStructure};
use bilex::transfer::relevant;
use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn lw() -> &'static Lingware {
    static LW: OnceLock<Lingware> = OnceLock::new();
    LW.get_or_init(lingware)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn unification_is_idempotent(seed in any::<u64>()) {
        let h = &lw().hierarchy;
        let a = random_fs(h, &mut StdRng::seed_from_u64(seed), 3);
        prop_assert_eq!(unify(h, &a, &a), Some(a));
    }

    #[test]
    fn unification_commutes_and_is_subsumed(seed in any::<u64>()) {
        let h = &lw().hierarchy;
        let rng = &mut StdRng::seed_from_u64(seed);
        let a = random_fs(h, rng, 3);
        let b = random_fs(h, rng, 3);
        let ab = unify(h, &a, &b);
        prop_assert_eq!(&ab, &unify(h, &b, &a));
        if let Some(r) = ab {
            prop_assert!(subsumes(h, &a, &r));
            prop_assert!(subsumes(h, &b, &r));
            prop_assert_eq!(Some(r.root_type()), h.glb(a.root_type(), b.root_type()));
        }
        if h.glb(a.root_type(), b.root_type()).is_none() {
            prop_assert!(unify(h, &a, &b).is_none());
        }
    }

    #[test]
    fn generalization_unifies_back(seed in any::<u64>()) {
        let h = &lw().hierarchy;
        let rng = &mut StdRng::seed_from_u64(seed);
        let a = random_fs(h, rng, 3);
        let feats: Vec<_> = a.graph().node(a.root()).feats.iter().map(|&(f, _)| f).collect();
        if let Some(&f) = feats.choose(rng) {
            let g = a.without(&[f]);
            prop_assert!(subsumes(h, &g, &a));
            prop_assert_eq!(unify(h, &g, &a), Some(a));
        }
    }

    #[test]
    fn glb_table_matches_down_sets(i in 0usize..1000, j in 0usize..1000) {
        let h = &lw().hierarchy;
        let types: Vec<_> = h.types().collect();
        let (a, b) = (types[i % types.len()], types[j % types.len()]);
        prop_assert_eq!(h.glb(a, b), glb_oracle(h, a, b));
        let atoms = unify(h, &FeatureStructure::atom(a), &FeatureStructure::atom(b));
        prop_assert_eq!(atoms.map(|r| r.root_type()), glb_oracle(h, a, b));
    }

    #[test]
    fn skolemization_is_a_bijection(seed in any::<u64>()) {
        let lw = lw();
        let s = session(lw, "english", "spanish");
        let rng = &mut StdRng::seed_from_u64(seed);
        let entries = s.entries();
        let e = entries.choose(rng).unwrap();
        if e.sl.is_empty() {
            return Ok(());
        }
        let rep = TransferRep::new(e.sl.clone());
        let sk = skolemize(&rep);
        let mut map = std::collections::BTreeMap::new();
        for (a, b) in rep.signs.iter().zip(&sk.signs) {
            for (p, q) in a.sem.iter().zip(&b.sem) {
                for (x, y) in p.args.iter().zip(&q.args) {
                    let mut vs = Vec::new();
                    x.vars(&mut vs);
                    let mut cs = Vec::new();
                    y.constants(&mut cs);
                    prop_assert_eq!(vs.len(), cs.len());
                    for (v, c) in vs.into_iter().zip(cs) {
                        let prev = map.insert(v.clone(), c);
                        prop_assert!(prev.is_none() || prev == Some(c), "{} mapped twice", v);
                    }
                }
            }
        }
        let images: BTreeSet<u32> = map.values().copied().collect();
        prop_assert_eq!(images.len(), map.len());
        prop_assert_eq!(images, (1..=map.len() as u32).collect::<BTreeSet<_>>());
    }

    #[test]
    fn covers_match_the_partition_oracle(seed in any::<u64>(), spanish in any::<bool>()) {
        let lw = lw();
        let (from, to) = if spanish { ("spanish", "english") } else { ("english", "spanish") };
        let s = session(lw, from, to);
        let h = &lw.hierarchy;
        let rng = &mut StdRng::seed_from_u64(seed);
        let noise = lw.language(from).unwrap().lexicon.signs().to_vec();
        let rep = random_rep(rng, s.entries(), &noise, 7);
        let entries = relevant(h, s.entries().to_vec(), &rep);
        let got = cover_keys(h, &rep, &entries);
        prop_assert_eq!(&got, &partition_oracle(h, &rep, &entries), "{}", rep.summary());
        for key in &got {
            let mut count = vec![0; rep.len()];
            for (_, ps) in key {
                for &p in ps {
                    count[p] += 1;
                }
            }
            prop_assert!(count.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn chart_generation_matches_permutations(seed in any::<u64>()) {
        let lw = lw();
        let h = &lw.hierarchy;
        let es = lw.language("spanish").unwrap();
        let golden: Vec<_> = golden_bags(lw).into_iter().filter(|b| b.len() <= 8).collect();
        let bag = random_bag(&mut StdRng::seed_from_u64(seed), &golden, &es.lexicon);
        let (chart, oracle) = both_generators(h, &es.grammar, &bag);
        prop_assert_eq!(chart, oracle);
    }

    #[test]
    fn bag_order_never_swaps_roles(seed in any::<u64>()) {
        let lw = lw();
        let h = &lw.hierarchy;
        let es = lw.language("spanish").unwrap();
        let s = session(lw, "english", "spanish");
        let mut bag = s.bags("John likes Mary").remove(0);
        bag.shuffle(&mut StdRng::seed_from_u64(seed));
        let (chart, _) = both_generators(h, &es.grammar, &bag);
        prop_assert_eq!(chart, BTreeSet::from(["Juan ama a María".to_string()]));
    }

    #[test]
    fn lookup_and_synthesis_round_trip(seed in any::<u64>(), spanish in any::<bool>()) {
        let lw = lw();
        let h = &lw.hierarchy;
        let lex = &lw.language(if spanish { "spanish" } else { "english" }).unwrap().lexicon;
        let rng = &mut StdRng::seed_from_u64(seed);
        let form = *lex.forms().choose(rng).unwrap();
        let (signs, _) = lex.lookup(h, form);
        prop_assert!(!signs.is_empty(), "{} not found", form);
        for s in signs {
            if let Ok(back) = synthesize(h, &s, &s.syn) {
                prop_assert_eq!(back.replace(' ', "_"), form.replace(' ', "_"));
            }
        }
    }
}

fn golden_bags(lw: &Lingware) -> Vec<Vec<bilex::lingware::LexicalSign>> {
    let s = session(lw, "english", "spanish");
    GOLDEN.iter().flat_map(|(src, _, _)| s.bags(src)).collect()
}

#[test]
fn expansion_is_monotone_in_depth() {
    let lw = lw();
    let h = &lw.hierarchy;
    let bl = lw.bilexicon("english", "spanish").unwrap();
    let en = &lw.language("english").unwrap().lexicon;
    let es = &lw.language("spanish").unwrap().lexicon;
    let mut prev: Vec<String> = Vec::new();
    for depth in 0..4 {
        let now: Vec<String> = bl.expand(h, &lw.vocab, en, es, depth).iter().map(|e| e.to_string()).collect();
        assert!(prev.iter().all(|e| now.contains(e)), "depth {depth} lost entries");
        prev = now;
    }
}

#[test]
fn derived_entries_keep_the_parent_lexemes() {
    let lw = lw();
    let h = &lw.hierarchy;
    let bl = lw.bilexicon("english", "spanish").unwrap();
    let en = &lw.language("english").unwrap().lexicon;
    let es = &lw.language("spanish").unwrap().lexicon;
    for e in bl.expand(h, &lw.vocab, en, es, 2) {
        if let bilex::transfer::Origin::Derived { parent, rule } = &e.origin {
            let mentions = |ids: Vec<&str>, of: &str| ids.iter().any(|i| i.starts_with(&of[..of.len() - 1]));
            let ids: Vec<&str> = e.sl.iter().chain(&e.sl_context).chain(&e.tl).chain(&e.tl_context).map(|s| s.id.as_str()).collect();
            // Derivational rules may rename (apple1 -> manzano1), but some
            // sign of the parent stays recognizable on one side.
            let kept = parent.sl.iter().chain(&parent.tl).any(|p| mentions(ids.clone(), &p.id))
                || rule == "fruit-tree"
                || rule == "support-verb";
            assert!(kept, "{}", e.describe());
        }
    }
}

#[test]
fn translation_preserves_skolem_constants() {
    let lw = lw();
    let s = session(lw, "english", "spanish");
    for (src, _, _) in GOLDEN {
        let rep = skolemize(&lw.analyse("english", src).unwrap().unwrap()[0]);
        let mut source = Vec::new();
        for sg in &rep.signs {
            for p in &sg.sem {
                for a in &p.args {
                    a.constants(&mut source);
                }
            }
        }
        let source: BTreeSet<u32> = source.into_iter().collect();
        for bag in s.bags(src) {
            let mut target = Vec::new();
            for sg in &bag {
                for p in &sg.sem {
                    for a in &p.args {
                        a.constants(&mut target);
                    }
                }
            }
            let target: BTreeSet<u32> = target.into_iter().collect();
            assert!(source.is_subset(&target) || target.iter().all(|c| source.contains(c) || *c > rep.max_constant()), "{src}");
        }
    }
}

#[test]
fn identity_entries_reverse_cleanly() {
    let lw = lw();
    let bl = lw.bilexicon("english", "spanish").unwrap();
    for e in &bl.entries {
        let back = bl.oriented(&bl.oriented(std::slice::from_ref(e), &Lang::new("spanish")), &Lang::new("spanish"));
        assert_eq!(&back[0], e);
    }
}

#[test]
fn every_fruit_yields_a_tree_or_nothing() {
    let lw = lw();
    let h = &lw.hierarchy;
    let bl = lw.bilexicon("english", "spanish").unwrap();
    let en = &lw.language("english").unwrap().lexicon;
    let es = &lw.language("spanish").unwrap().lexicon;
    let all = bl.expand(h, &lw.vocab, en, es, 2);
    let trees: BTreeSet<String> = all
        .iter()
        .filter(|e| matches!(&e.origin, bilex::transfer::Origin::Derived { rule, .. } if rule == "fruit-tree"))
        .map(|e| e.tl[0].id.clone())
        .collect();
    let fruit_nouns: Vec<&str> = es
        .signs()
        .iter()
        .filter(|s| {
            let p = bilex::tfs::parse_path(h, "denot").unwrap();
            s.qualia.type_at(&p).is_some_and(|t| h.type_name(t) == "tree-fruit")
        })
        .map(|s| s.id.as_str())
        .collect();
    assert_eq!(trees.len(), fruit_nouns.len());
    for t in &trees {
        let sign = es.get(t).unwrap();
        assert_eq!(sign.sem[0].args.len(), 1);
        assert!(matches!(sign.sem[0].args[0], SemTerm::Var(_)));
    }
}

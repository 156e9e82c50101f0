//! Unification grammars over categories with semantic argument slots.

use std::collections::HashMap;

use crate::dsl::{CatDecl, FeatVal, RuleDecl, Stmt};
use crate::lingware::{term_from_decl, LexicalSign, LingwareError, SemPredicate, SemTerm, Subst};
use crate::tfs::{parse_path, FsGraph, NodeId, TypeHierarchy, TypeId, Workspace};

/// A phrase-structure rule with one or two daughters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarRule {
    pub name: String,
    /// Roots: mother, then daughters.
    graph: FsGraph,
    args: Vec<Vec<SemTerm>>,
    /// Internal state labels introduced by binarization, per root.
    labels: Vec<Option<String>>,
}

/// A built constituent: its category plus the instantiated categories of
/// the lexical leaves it dominates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constituent {
    /// Roots: the mother category, then one syn structure per leaf.
    pub graph: FsGraph,
    pub label: Option<String>,
    pub args: Vec<SemTerm>,
    /// Leaf ids in surface order.
    pub leaves: Vec<usize>,
    /// Semantics of each leaf, with bindings applied.
    pub sems: Vec<Vec<SemPredicate>>,
}

impl Constituent {
    pub fn lexical(id: usize, sign: &LexicalSign) -> Constituent {
        let syn = sign.syn.graph();
        let g = syn.clone();
        let mut ws = Workspace::new();
        let r = ws.add(&g)[0];
        Constituent {
            graph: ws.extract(&[r, r]).expect("acyclic"),
            label: None,
            args: sign.index(),
            leaves: vec![id],
            sems: vec![sign.sem.clone()],
        }
    }

    pub fn category_type(&self) -> TypeId {
        self.graph.node(self.graph.root(0)).ty
    }

    /// Instantiated syn structure of the `i`th leaf.
    pub fn leaf_syn(&self, i: usize) -> crate::tfs::FeatureStructure {
        self.graph.project(i + 1)
    }
}

impl GrammarRule {
    pub fn daughters(&self) -> usize {
        self.args.len() - 1
    }

    pub fn mother_type(&self) -> TypeId {
        self.graph.node(self.graph.root(0)).ty
    }

    pub fn daughter_type(&self, i: usize) -> TypeId {
        self.graph.node(self.graph.root(i + 1)).ty
    }

    pub fn daughter_label(&self, i: usize) -> Option<&str> {
        self.labels[i + 1].as_deref()
    }

    pub fn daughter_arity(&self, i: usize) -> usize {
        self.args[i + 1].len()
    }

    /// Cheap pre-check that daughter `i` could accept `c`.
    pub fn may_accept(&self, h: &TypeHierarchy, i: usize, c: &Constituent) -> bool {
        self.labels[i + 1] == c.label
            && self.args[i + 1].len() == c.args.len()
            && h.glb(self.daughter_type(i), c.category_type()).is_some()
    }

    /// Combines `dtrs` (in daughter order) under this rule. `stamp` keeps
    /// rule variables of distinct applications apart.
    pub fn apply(&self, h: &TypeHierarchy, dtrs: &[&Constituent], stamp: usize) -> Option<Constituent> {
        if dtrs.len() != self.daughters() {
            return None;
        }
        for (i, d) in dtrs.iter().enumerate() {
            if !self.may_accept(h, i, d) {
                return None;
            }
        }
        let rename = |t: &SemTerm| t.map_vars(&mut |v| SemTerm::Var(format!("#{stamp}{v}")));
        let args: Vec<Vec<SemTerm>> = self.args.iter().map(|a| a.iter().map(rename).collect()).collect();
        let mut subst = Subst::new();
        for (i, d) in dtrs.iter().enumerate() {
            for (a, b) in args[i + 1].iter().zip(&d.args) {
                if !subst.unify(a, b) {
                    return None;
                }
            }
        }
        let mut ws = Workspace::new();
        let rule_roots = ws.add(&self.graph);
        let mut roots = vec![rule_roots[0]];
        for (i, d) in dtrs.iter().enumerate() {
            let dr = ws.add(&d.graph);
            if !ws.unify(h, rule_roots[i + 1], dr[0]) {
                return None;
            }
            roots.extend_from_slice(&dr[1..]);
        }
        let graph = ws.extract(&roots)?;
        Some(Constituent {
            graph,
            label: self.labels[0].clone(),
            args: args[0].iter().map(|t| subst.apply(t)).collect(),
            leaves: dtrs.iter().flat_map(|d| d.leaves.iter().copied()).collect(),
            sems: dtrs
                .iter()
                .flat_map(|d| d.sems.iter())
                .map(|ps| ps.iter().map(|p| subst.apply_pred(p)).collect())
                .collect(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Grammar {
    root: TypeId,
    rules: Vec<GrammarRule>,
}

impl Grammar {
    /// Collects `root` and `rule` statements; other statements are ignored.
    /// Rules with more than two daughters are binarized.
    pub fn from_stmts(h: &TypeHierarchy, stmts: &[Stmt]) -> Result<Grammar, LingwareError> {
        let mut root = None;
        let mut rules = Vec::new();
        for s in stmts {
            match s {
                Stmt::Root(r) => root = Some(h.type_id(r)?),
                Stmt::Rule(rd) => rules.extend(compile_rule(h, rd)?),
                _ => {}
            }
        }
        let root = match root {
            Some(r) => r,
            None => h.type_id("s")?,
        };
        Ok(Grammar { root, rules })
    }

    pub fn new(root: TypeId, rules: Vec<GrammarRule>) -> Grammar {
        Grammar { root, rules }
    }

    pub fn root(&self) -> TypeId {
        self.root
    }

    pub fn rules(&self) -> &[GrammarRule] {
        &self.rules
    }

    pub fn unary(&self) -> impl Iterator<Item = &GrammarRule> {
        self.rules.iter().filter(|r| r.daughters() == 1)
    }

    pub fn binary(&self) -> impl Iterator<Item = &GrammarRule> {
        self.rules.iter().filter(|r| r.daughters() == 2)
    }

    /// `items` plus everything unary rules build on top of them, without
    /// duplicates.
    pub fn close_unary(&self, h: &TypeHierarchy, items: Vec<Constituent>, stamp: &mut usize) -> Vec<Constituent> {
        let mut seen: std::collections::HashSet<Constituent> = items.iter().cloned().collect();
        let mut out = items;
        let mut start = 0;
        while start < out.len() {
            let end = out.len();
            for i in start..end {
                for rule in self.unary() {
                    *stamp += 1;
                    if let Some(c) = rule.apply(h, &[&out[i]], *stamp) {
                        if seen.insert(c.clone()) {
                            out.push(c);
                        }
                    }
                }
            }
            start = end;
        }
        out
    }

    /// A constituent that may stand as a complete sentence.
    pub fn is_root(&self, h: &TypeHierarchy, c: &Constituent) -> bool {
        c.label.is_none() && h.glb(self.root, c.category_type()).is_some()
    }
}

fn invalid(rd: &RuleDecl, msg: impl std::fmt::Display) -> LingwareError {
    LingwareError::invalid(rd.line, format!("rule {}: {msg}", rd.name))
}

fn cat_node(
    h: &TypeHierarchy,
    rd: &RuleDecl,
    ws: &mut Workspace,
    tags: &mut HashMap<String, NodeId>,
    cat: &CatDecl,
) -> Result<NodeId, LingwareError> {
    let ty = h.type_id(&cat.ty).map_err(|e| invalid(rd, e))?;
    let n = ws.new_node(ty);
    for (path, val) in &cat.feats {
        let p = parse_path(h, path).map_err(|e| invalid(rd, e))?;
        let at = ws
            .path_node(h, n, &p)
            .ok_or_else(|| invalid(rd, format!("{path} is not appropriate for {}", cat.ty)))?;
        let ok = match val {
            FeatVal::Type(t) => {
                let t = h.type_id(t).map_err(|e| invalid(rd, e))?;
                ws.coerce(h, at, t)
            }
            FeatVal::Tag(tag) => match tags.get(tag) {
                Some(&other) => ws.unify(h, at, other),
                None => {
                    tags.insert(tag.clone(), at);
                    true
                }
            },
        };
        if !ok {
            return Err(invalid(rd, format!("inconsistent value for {path}")));
        }
    }
    Ok(n)
}

fn compile_rule(h: &TypeHierarchy, rd: &RuleDecl) -> Result<Vec<GrammarRule>, LingwareError> {
    let mut ws = Workspace::new();
    let mut tags = HashMap::new();
    let mother = cat_node(h, rd, &mut ws, &mut tags, &rd.mother)?;
    let mut dtrs = Vec::new();
    for d in &rd.daughters {
        dtrs.push(cat_node(h, rd, &mut ws, &mut tags, d)?);
    }
    let terms = |c: &CatDecl| -> Vec<SemTerm> { c.args.iter().map(term_from_decl).collect() };
    let m_args = terms(&rd.mother);
    let d_args: Vec<Vec<SemTerm>> = rd.daughters.iter().map(terms).collect();
    let mut dvars = Vec::new();
    for a in d_args.iter().flatten() {
        a.vars(&mut dvars);
    }
    let mut mvars = Vec::new();
    for a in &m_args {
        a.vars(&mut mvars);
    }
    if let Some(v) = mvars.iter().find(|v| !dvars.contains(v)) {
        return Err(invalid(rd, format!("mother variable {v} appears in no daughter")));
    }
    let n = dtrs.len();
    if n <= 2 {
        let mut roots = vec![mother];
        roots.extend(&dtrs);
        let mut args = vec![m_args];
        args.extend(d_args);
        return Ok(vec![GrammarRule {
            name: rd.name.clone(),
            graph: ws.extract(&roots).ok_or_else(|| invalid(rd, "cyclic structure"))?,
            args,
            labels: vec![None; n + 1],
        }]);
    }
    if n > 15 {
        return Err(invalid(rd, "more than 15 daughters"));
    }
    // Left-branching chain: state k covers daughters 0..=k and carries the
    // mother and every daughter in its slots so sharing survives.
    let mut all_vars = mvars.clone();
    for v in dvars {
        if !all_vars.contains(&v) {
            all_vars.push(v);
        }
    }
    let state_args: Vec<SemTerm> = all_vars.iter().map(|v| SemTerm::Var(v.clone())).collect();
    let mut states = Vec::new();
    for _ in 0..n - 2 {
        let s = ws.new_node(h.rule_state());
        ws.set_raw(s, h.rule_slot(0), mother);
        for (j, &d) in dtrs.iter().enumerate() {
            ws.set_raw(s, h.rule_slot(j + 1), d);
        }
        states.push(s);
    }
    let label = |k: usize| Some(format!("{}#{k}", rd.name));
    let mut out = Vec::new();
    for k in 0..n - 1 {
        let (m, m_lab, m_args) = if k == n - 2 {
            (mother, None, m_args.clone())
        } else {
            (states[k], label(k), state_args.clone())
        };
        let (left, l_lab, l_args) = if k == 0 {
            (dtrs[0], None, d_args[0].clone())
        } else {
            (states[k - 1], label(k - 1), state_args.clone())
        };
        let graph = ws
            .extract(&[m, left, dtrs[k + 1]])
            .ok_or_else(|| invalid(rd, "cyclic structure"))?;
        out.push(GrammarRule {
            name: format!("{}#{k}", rd.name),
            graph,
            args: vec![m_args, l_args, d_args[k + 1].clone()],
            labels: vec![m_lab, l_lab, None],
        });
    }
    Ok(out)
}

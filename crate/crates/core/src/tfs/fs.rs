//! Feature structure graphs and non-destructive unification.
//!
//! A [`FsGraph`] is an immutable, canonically numbered DAG with one or more
//! roots. Unification copies its inputs into a [`Workspace`], merges nodes
//! with union-find and extracts a fresh canonical graph, so the inputs are
//! never touched. Because extraction numbers nodes depth-first from the
//! roots with features in id order, two graphs are isomorphic exactly when
//! they compare equal.

use std::collections::HashMap;

use super::hierarchy::{FeatId, HierarchyError, TypeHierarchy, TypeId};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub ty: TypeId,
    /// Sorted by feature id.
    pub feats: Vec<(FeatId, NodeId)>,
}

impl Node {
    pub fn get(&self, f: FeatId) -> Option<NodeId> {
        self.feats
            .binary_search_by_key(&f, |&(g, _)| g)
            .ok()
            .map(|i| self.feats[i].1)
    }
}

/// Immutable multi-rooted feature graph in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FsGraph {
    nodes: Vec<Node>,
    roots: Vec<NodeId>,
}

impl FsGraph {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> NodeId {
        self.roots[i]
    }

    /// Follows `path` from `start`.
    pub fn follow(&self, start: NodeId, path: &[FeatId]) -> Option<NodeId> {
        path.iter()
            .try_fold(start, |n, &f| self.nodes[n].get(f))
    }

    /// The sub-structure at `root(i)` as a standalone structure.
    pub fn project(&self, i: usize) -> FeatureStructure {
        let mut ws = Workspace::new();
        let ids = ws.add(self);
        FeatureStructure(ws.extract(&[ids[i]]).expect("projection of acyclic graph"))
    }
}

/// A single-rooted feature structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureStructure(FsGraph);

impl FeatureStructure {
    /// A structure consisting of a single node of type `ty`.
    pub fn atom(ty: TypeId) -> Self {
        FeatureStructure(FsGraph {
            nodes: vec![Node { ty, feats: Vec::new() }],
            roots: vec![0],
        })
    }

    pub fn top(h: &TypeHierarchy) -> Self {
        Self::atom(h.top())
    }

    pub fn graph(&self) -> &FsGraph {
        &self.0
    }

    pub fn root(&self) -> NodeId {
        self.0.roots[0]
    }

    pub fn root_type(&self) -> TypeId {
        self.0.nodes[self.root()].ty
    }

    /// Type found at `path`, if the path exists.
    pub fn type_at(&self, path: &[FeatId]) -> Option<TypeId> {
        self.0.follow(self.root(), path).map(|n| self.0.nodes[n].ty)
    }

    pub fn at(&self, path: &[FeatId]) -> Option<FeatureStructure> {
        let n = self.0.follow(self.root(), path)?;
        let mut ws = Workspace::new();
        ws.add(&self.0);
        ws.extract(&[n]).map(FeatureStructure)
    }

    /// Copy of `self` with the feature at the end of `path` removed.
    pub fn without(&self, path: &[FeatId]) -> FeatureStructure {
        let Some((&last, prefix)) = path.split_last() else {
            return self.clone();
        };
        let Some(parent) = self.0.follow(self.root(), prefix) else {
            return self.clone();
        };
        let mut ws = Workspace::new();
        ws.add(&self.0);
        ws.nodes[parent].feats.retain(|&(f, _)| f != last);
        FeatureStructure(ws.extract(&[self.root()]).expect("acyclic"))
    }

    pub fn into_graph(self) -> FsGraph {
        self.0
    }

    pub fn from_graph(g: FsGraph) -> Self {
        assert_eq!(g.roots.len(), 1);
        FeatureStructure(g)
    }

    /// Unifies `value` into `self` at `path`, creating intermediate nodes.
    pub fn with_value(
        &self,
        h: &TypeHierarchy,
        path: &[FeatId],
        value: &FeatureStructure,
    ) -> Option<FeatureStructure> {
        let mut ws = Workspace::new();
        let r = ws.add(&self.0)[0];
        let v = ws.add(&value.0)[0];
        let at = ws.path_node(h, r, path)?;
        if !ws.unify(h, at, v) {
            return None;
        }
        ws.extract(&[r]).map(FeatureStructure)
    }
}

/// Unification of two single-rooted structures. `None` is failure.
pub fn unify(h: &TypeHierarchy, a: &FeatureStructure, b: &FeatureStructure) -> Option<FeatureStructure> {
    let mut ws = Workspace::new();
    let x = ws.add(&a.0)[0];
    let y = ws.add(&b.0)[0];
    if !ws.unify(h, x, y) {
        return None;
    }
    ws.extract(&[x]).map(FeatureStructure)
}

#[derive(Clone, Debug)]
struct WNode {
    ty: TypeId,
    feats: Vec<(FeatId, NodeId)>,
    fwd: Option<NodeId>,
}

/// Mutable scratch space for building and unifying graphs.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    nodes: Vec<WNode>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_node(&mut self, ty: TypeId) -> NodeId {
        self.nodes.push(WNode {
            ty,
            feats: Vec::new(),
            fwd: None,
        });
        self.nodes.len() - 1
    }

    /// Copies `g` in; returns the workspace ids of its roots.
    pub fn add(&mut self, g: &FsGraph) -> Vec<NodeId> {
        let off = self.nodes.len();
        for n in &g.nodes {
            self.nodes.push(WNode {
                ty: n.ty,
                feats: n.feats.iter().map(|&(f, c)| (f, c + off)).collect(),
                fwd: None,
            });
        }
        g.roots.iter().map(|r| r + off).collect()
    }

    pub fn deref(&self, mut n: NodeId) -> NodeId {
        while let Some(m) = self.nodes[n].fwd {
            n = m;
        }
        n
    }

    pub fn type_of(&self, n: NodeId) -> TypeId {
        self.nodes[self.deref(n)].ty
    }

    pub fn get(&self, n: NodeId, f: FeatId) -> Option<NodeId> {
        let n = self.deref(n);
        self.nodes[n]
            .feats
            .iter()
            .find(|&&(g, _)| g == f)
            .map(|&(_, c)| self.deref(c))
    }

    /// Sets feature `f` of `n` to `child` without any checking; used by
    /// builders that construct well-typed structures directly.
    pub fn set_raw(&mut self, n: NodeId, f: FeatId, child: NodeId) {
        let n = self.deref(n);
        let feats = &mut self.nodes[n].feats;
        match feats.binary_search_by_key(&f, |&(g, _)| g) {
            Ok(i) => feats[i].1 = child,
            Err(i) => feats.insert(i, (f, child)),
        }
    }

    /// Node at `path` below `n`, created with appropriate types when missing.
    /// Fails when a feature on the path is not appropriate.
    pub fn path_node(&mut self, h: &TypeHierarchy, n: NodeId, path: &[FeatId]) -> Option<NodeId> {
        let mut cur = self.deref(n);
        for &f in path {
            if let Some(c) = self.get(cur, f) {
                cur = c;
                continue;
            }
            let constraint = h.approp(self.nodes[cur].ty, f)?;
            let c = self.new_node(constraint);
            self.set_raw(cur, f, c);
            cur = c;
        }
        Some(cur)
    }

    /// Narrows the type of `n` to `ty`, enforcing appropriateness.
    pub fn coerce(&mut self, h: &TypeHierarchy, n: NodeId, ty: TypeId) -> bool {
        let n = self.deref(n);
        let Some(t) = h.glb(self.nodes[n].ty, ty) else {
            return false;
        };
        if t == self.nodes[n].ty {
            return true;
        }
        self.nodes[n].ty = t;
        self.check_features(h, n)
    }

    fn check_features(&mut self, h: &TypeHierarchy, n: NodeId) -> bool {
        let t = self.nodes[n].ty;
        let feats = self.nodes[n].feats.clone();
        for (f, c) in feats {
            let Some(constraint) = h.approp(t, f) else {
                return false;
            };
            if !self.coerce(h, c, constraint) {
                return false;
            }
        }
        true
    }

    /// Destructively unifies two workspace nodes.
    pub fn unify(&mut self, h: &TypeHierarchy, a: NodeId, b: NodeId) -> bool {
        let a = self.deref(a);
        let b = self.deref(b);
        if a == b {
            return true;
        }
        let Some(t) = h.glb(self.nodes[a].ty, self.nodes[b].ty) else {
            return false;
        };
        let b_feats = std::mem::take(&mut self.nodes[b].feats);
        self.nodes[b].fwd = Some(a);
        let retyped = self.nodes[a].ty != t;
        self.nodes[a].ty = t;
        for (f, bc) in b_feats {
            match self.get(a, f) {
                Some(ac) => {
                    if !self.unify(h, ac, bc) {
                        return false;
                    }
                }
                None => {
                    if h.approp(t, f).is_none() {
                        return false;
                    }
                    self.set_raw(a, f, bc);
                }
            }
        }
        if retyped || !self.nodes[self.deref(a)].feats.is_empty() {
            let a = self.deref(a);
            if !self.check_features(h, a) {
                return false;
            }
        }
        true
    }

    /// Canonical graph reachable from `roots`; `None` if a cycle formed.
    pub fn extract(&self, roots: &[NodeId]) -> Option<FsGraph> {
        let mut map: HashMap<NodeId, NodeId> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut on_path: Vec<bool> = vec![false; self.nodes.len()];
        let mut out_roots = Vec::with_capacity(roots.len());
        for &r in roots {
            out_roots.push(self.copy_out(self.deref(r), &mut map, &mut nodes, &mut on_path)?);
        }
        Some(FsGraph {
            nodes,
            roots: out_roots,
        })
    }

    fn copy_out(
        &self,
        n: NodeId,
        map: &mut HashMap<NodeId, NodeId>,
        nodes: &mut Vec<Node>,
        on_path: &mut [bool],
    ) -> Option<NodeId> {
        if on_path[n] {
            return None;
        }
        if let Some(&m) = map.get(&n) {
            return Some(m);
        }
        let id = nodes.len();
        map.insert(n, id);
        nodes.push(Node {
            ty: self.nodes[n].ty,
            feats: Vec::new(),
        });
        on_path[n] = true;
        let mut feats = self.nodes[n].feats.clone();
        feats.sort_by_key(|&(f, _)| f);
        let mut out = Vec::with_capacity(feats.len());
        for (f, c) in feats {
            let c = self.deref(c);
            out.push((f, self.copy_out(c, map, nodes, on_path)?));
        }
        on_path[n] = false;
        nodes[id].feats = out;
        Some(id)
    }
}

/// Parses a dotted path such as `qualia.supp.ntrl`.
pub fn parse_path(h: &TypeHierarchy, path: &str) -> Result<Vec<FeatId>, HierarchyError> {
    if path.is_empty() {
        return Ok(Vec::new());
    }
    path.split('.').map(|f| h.feature_id(f)).collect()
}

/// Builds a structure of type `root` from `(path, type)` assignments.
pub fn build(
    h: &TypeHierarchy,
    root: TypeId,
    assignments: &[(Vec<FeatId>, TypeId)],
) -> Option<FeatureStructure> {
    let mut ws = Workspace::new();
    let r = ws.new_node(root);
    for (path, ty) in assignments {
        let n = ws.path_node(h, r, path)?;
        if !ws.coerce(h, n, *ty) {
            return None;
        }
    }
    ws.extract(&[r]).map(FeatureStructure)
}

/// `general` subsumes `specific`: every type in `general` is at least as
/// general as its counterpart, every feature is present, and every
/// reentrancy of `general` is also a reentrancy in `specific`.
pub fn subsumes(h: &TypeHierarchy, general: &FeatureStructure, specific: &FeatureStructure) -> bool {
    fn walk(
        h: &TypeHierarchy,
        g: &FsGraph,
        s: &FsGraph,
        gn: NodeId,
        sn: NodeId,
        map: &mut HashMap<NodeId, NodeId>,
    ) -> bool {
        if let Some(&prev) = map.get(&gn) {
            return prev == sn;
        }
        map.insert(gn, sn);
        let (gnode, snode) = (g.node(gn), s.node(sn));
        if !h.subsumes(gnode.ty, snode.ty) {
            return false;
        }
        gnode.feats.iter().all(|&(f, gc)| match snode.get(f) {
            Some(sc) => walk(h, g, s, gc, sc, map),
            None => false,
        })
    }
    let mut map = HashMap::new();
    walk(h, general.graph(), specific.graph(), general.root(), specific.root(), &mut map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfs::hierarchy::HierarchyDecls;

    fn hier() -> TypeHierarchy {
        let d = HierarchyDecls::default()
            .edge("top", "sign")
            .edge("sign", "verb")
            .edge("sign", "noun")
            .edge("top", "agr")
            .edge("agr", "3sg")
            .edge("agr", "3pl")
            .edge("top", "syn")
            .feature("sign", "agr", "agr")
            .feature("sign", "syn", "syn")
            .feature("syn", "agr", "agr")
            .feature("syn", "head", "top");
        TypeHierarchy::compile(&d).unwrap()
    }

    fn fs(h: &TypeHierarchy, root: &str, pairs: &[(&str, &str)]) -> FeatureStructure {
        let a: Vec<_> = pairs
            .iter()
            .map(|(p, t)| (parse_path(h, p).unwrap(), h.type_id(t).unwrap()))
            .collect();
        build(h, h.type_id(root).unwrap(), &a).unwrap()
    }

    #[test]
    fn top_is_unit() {
        let h = hier();
        let x = fs(&h, "sign", &[("agr", "3sg")]);
        assert_eq!(unify(&h, &x, &FeatureStructure::top(&h)).unwrap(), x);
        assert_eq!(unify(&h, &FeatureStructure::top(&h), &x).unwrap(), x);
    }

    #[test]
    fn idempotent_on_agreement() {
        let h = hier();
        let x = fs(&h, "sign", &[("agr", "3sg")]);
        assert_eq!(unify(&h, &x, &x).unwrap(), x);
    }

    #[test]
    fn atomic_clash_fails() {
        let h = hier();
        let a = fs(&h, "sign", &[("agr", "3sg")]);
        let b = fs(&h, "verb", &[("agr", "3pl")]);
        assert!(unify(&h, &a, &b).is_none());
    }

    #[test]
    fn inappropriate_feature_fails() {
        let h = hier();
        let a = fs(&h, "syn", &[("head", "top")]);
        let b = fs(&h, "sign", &[]);
        // syn and sign have no common subtype
        assert!(unify(&h, &a, &b).is_none());
        // agr is not appropriate for agr-typed values
        assert!(build(&h, h.type_id("agr").unwrap(), &[(parse_path(&h, "agr").unwrap(), h.top())]).is_none());
    }

    #[test]
    fn reentrancy_merges_and_propagates() {
        let h = hier();
        // sign[agr: #1, syn: syn[agr: #1]]
        let mut ws = Workspace::new();
        let r = ws.new_node(h.type_id("sign").unwrap());
        let shared = ws.new_node(h.type_id("agr").unwrap());
        let syn = ws.new_node(h.type_id("syn").unwrap());
        ws.set_raw(r, h.feature_id("agr").unwrap(), shared);
        ws.set_raw(r, h.feature_id("syn").unwrap(), syn);
        ws.set_raw(syn, h.feature_id("agr").unwrap(), shared);
        let a = FeatureStructure::from_graph(ws.extract(&[r]).unwrap());
        let b = fs(&h, "sign", &[("syn.agr", "3pl")]);
        let c = unify(&h, &a, &b).unwrap();
        let agr = h.feature_id("agr").unwrap();
        assert_eq!(c.type_at(&[agr]), Some(h.type_id("3pl").unwrap()));
        assert!(subsumes(&h, &a, &c));
        assert!(subsumes(&h, &b, &c));
        assert!(!subsumes(&h, &c, &b));
        // inputs untouched
        assert_eq!(a.type_at(&[agr]), Some(h.type_id("agr").unwrap()));
    }

    #[test]
    fn without_drops_a_feature() {
        let h = hier();
        let a = fs(&h, "sign", &[("agr", "3sg"), ("syn.agr", "3pl")]);
        let b = a.without(&parse_path(&h, "syn.agr").unwrap());
        assert_eq!(b, fs(&h, "sign", &[("agr", "3sg"), ("syn", "syn")]));
    }
}

//! Finite type hierarchies with precomputed greatest lower bounds and
//! appropriateness conditions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Index of a type inside its [`TypeHierarchy`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub(crate) u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of an interned feature name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatId(pub(crate) u32);

impl FeatId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Name of the type that carries the bookkeeping features used when
/// n-ary grammar rules are binarized. It admits any feature.
pub const RULE_STATE_TYPE: &str = "*rule-state*";
/// Number of bookkeeping features interned for binarization.
pub const RULE_STATE_SLOTS: usize = 16;

/// Raw declarations, as read from a `types` section.
#[derive(Clone, Debug, Default)]
pub struct HierarchyDecls {
    /// `(parent, child)` edges.
    pub edges: Vec<(String, String)>,
    /// `(type, feature, value type)` appropriateness declarations.
    pub approp: Vec<(String, String, String)>,
}

impl HierarchyDecls {
    pub fn edge(mut self, parent: &str, child: &str) -> Self {
        self.edges.push((parent.to_string(), child.to_string()));
        self
    }

    pub fn feature(mut self, ty: &str, feat: &str, value: &str) -> Self {
        self.approp
            .push((ty.to_string(), feat.to_string(), value.to_string()));
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("empty hierarchy")]
    Empty,
    #[error("cycle in subtype relation through {0}")]
    Cycle(String),
    #[error("hierarchy has several most general types: {0:?}")]
    MultipleTops(Vec<String>),
    #[error("types {a} and {b} have no unique greatest lower bound (maximal common subtypes: {candidates:?})")]
    NonUniqueGlb {
        a: String,
        b: String,
        candidates: Vec<String>,
    },
    #[error("appropriateness of {feature} on {ty}: {reason}")]
    Appropriateness {
        ty: String,
        feature: String,
        reason: String,
    },
    #[error("unknown type {0}")]
    UnknownType(String),
    #[error("unknown feature {0}")]
    UnknownFeature(String),
}

/// A compiled, validated type hierarchy.
///
/// Types form a partial order with a single most general type; every pair
/// of types with a common subtype has a unique greatest lower bound.
#[derive(Clone)]
pub struct TypeHierarchy {
    names: Vec<String>,
    by_name: HashMap<String, TypeId>,
    parents: Vec<Vec<TypeId>>,
    children: Vec<Vec<TypeId>>,
    // descendants[t][u] <=> u is a subtype of (or equal to) t
    descendants: Vec<Vec<bool>>,
    glb: Vec<Vec<Option<TypeId>>>,
    features: Vec<String>,
    feat_by_name: HashMap<String, FeatId>,
    approp: Vec<BTreeMap<FeatId, TypeId>>,
    open: Vec<bool>,
    top: TypeId,
    rule_state: TypeId,
}

impl fmt::Debug for TypeHierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeHierarchy")
            .field("types", &self.names.len())
            .field("features", &self.features.len())
            .finish()
    }
}

impl TypeHierarchy {
    /// Validates the declarations and precomputes the GLB table.
    pub fn compile(decls: &HierarchyDecls) -> Result<TypeHierarchy, HierarchyError> {
        let mut names: Vec<String> = Vec::new();
        let mut by_name: HashMap<String, TypeId> = HashMap::new();
        let mut intern = |n: &str, names: &mut Vec<String>| -> TypeId {
            if let Some(&id) = by_name.get(n) {
                return id;
            }
            let id = TypeId(names.len() as u32);
            names.push(n.to_string());
            by_name.insert(n.to_string(), id);
            id
        };
        let mut edges = Vec::new();
        for (p, c) in &decls.edges {
            let p = intern(p, &mut names);
            let c = intern(c, &mut names);
            edges.push((p, c));
        }
        for (t, _, v) in &decls.approp {
            intern(t, &mut names);
            intern(v, &mut names);
        }
        if names.is_empty() {
            return Err(HierarchyError::Empty);
        }
        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &edges {
            if !children[p.index()].contains(&c) {
                children[p.index()].push(c);
                parents[c.index()].push(p);
            }
        }
        let tops: Vec<TypeId> = (0..n)
            .map(|i| TypeId(i as u32))
            .filter(|t| parents[t.index()].is_empty())
            .collect();
        let order = topo_order(&names, &parents, &children)?;
        if tops.len() != 1 {
            let mut ns: Vec<String> = tops.iter().map(|t| names[t.index()].clone()).collect();
            ns.sort();
            return Err(HierarchyError::MultipleTops(ns));
        }
        let top = tops[0];

        // The binarization type hangs directly below top.
        let rule_state = TypeId(names.len() as u32);
        names.push(RULE_STATE_TYPE.to_string());
        by_name.insert(RULE_STATE_TYPE.to_string(), rule_state);
        parents.push(vec![top]);
        children.push(Vec::new());
        children[top.index()].push(rule_state);
        let mut order = order;
        order.push(rule_state);
        let n = names.len();

        // descendants via reverse topological order
        let mut descendants = vec![vec![false; n]; n];
        for &t in order.iter().rev() {
            descendants[t.index()][t.index()] = true;
            for &c in &children[t.index()] {
                let below = descendants[c.index()].clone();
                for (d, b) in descendants[t.index()].iter_mut().zip(below) {
                    *d |= b;
                }
            }
        }

        let mut glb = vec![vec![None; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<usize> = (0..n)
                    .filter(|&u| descendants[a][u] && descendants[b][u])
                    .collect();
                if lower.is_empty() {
                    continue;
                }
                let greatest = lower
                    .iter()
                    .copied()
                    .find(|&l| lower.iter().all(|&m| descendants[l][m]));
                match greatest {
                    Some(g) => {
                        glb[a][b] = Some(TypeId(g as u32));
                        glb[b][a] = Some(TypeId(g as u32));
                    }
                    None => {
                        let mut maximal: Vec<String> = lower
                            .iter()
                            .copied()
                            .filter(|&l| !lower.iter().any(|&m| m != l && descendants[m][l]))
                            .map(|l| names[l].clone())
                            .collect();
                        maximal.sort();
                        return Err(HierarchyError::NonUniqueGlb {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            candidates: maximal,
                        });
                    }
                }
            }
        }

        let mut features: Vec<String> = Vec::new();
        let mut feat_by_name: HashMap<String, FeatId> = HashMap::new();
        let mut local: Vec<BTreeMap<FeatId, TypeId>> = vec![BTreeMap::new(); n];
        for (t, f, v) in &decls.approp {
            let fid = *feat_by_name.entry(f.clone()).or_insert_with(|| {
                features.push(f.clone());
                FeatId(features.len() as u32 - 1)
            });
            let t = by_name[t];
            let v = by_name[v];
            if let Some(prev) = local[t.index()].insert(fid, v) {
                if prev != v {
                    return Err(HierarchyError::Appropriateness {
                        ty: names[t.index()].clone(),
                        feature: f.clone(),
                        reason: "declared twice with different values".into(),
                    });
                }
            }
        }
        for i in 0..RULE_STATE_SLOTS {
            let name = format!("*{i}");
            feat_by_name.insert(name.clone(), FeatId(features.len() as u32));
            features.push(name);
        }

        let mut approp: Vec<BTreeMap<FeatId, TypeId>> = vec![BTreeMap::new(); n];
        for &t in &order {
            let mut eff: BTreeMap<FeatId, TypeId> = BTreeMap::new();
            for &p in &parents[t.index()] {
                for (&f, &v) in &approp[p.index()] {
                    let merged = match eff.get(&f) {
                        None => Some(v),
                        Some(&w) => glb[v.index()][w.index()],
                    };
                    match merged {
                        Some(m) => {
                            eff.insert(f, m);
                        }
                        None => {
                            return Err(HierarchyError::Appropriateness {
                                ty: names[t.index()].clone(),
                                feature: features[f.index()].clone(),
                                reason: "inherited value constraints are incompatible".into(),
                            })
                        }
                    }
                }
            }
            for (&f, &v) in &local[t.index()] {
                if let Some(&inherited) = eff.get(&f) {
                    if !descendants[inherited.index()][v.index()] {
                        return Err(HierarchyError::Appropriateness {
                            ty: names[t.index()].clone(),
                            feature: features[f.index()].clone(),
                            reason: format!(
                                "value {} is not a subtype of inherited {}",
                                names[v.index()],
                                names[inherited.index()]
                            ),
                        });
                    }
                }
                eff.insert(f, v);
            }
            approp[t.index()] = eff;
        }
        let mut open = vec![false; n];
        open[rule_state.index()] = true;

        Ok(TypeHierarchy {
            names,
            by_name,
            parents,
            children,
            descendants,
            glb,
            features,
            feat_by_name,
            approp,
            open,
            top,
            rule_state,
        })
    }

    pub fn top(&self) -> TypeId {
        self.top
    }

    pub(crate) fn rule_state(&self) -> TypeId {
        self.rule_state
    }

    pub(crate) fn rule_slot(&self, i: usize) -> FeatId {
        self.feat_by_name[&format!("*{i}")]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn types(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.names.len() as u32).map(TypeId)
    }

    /// Types declared in the source, excluding internal bookkeeping types.
    pub fn declared_types(&self) -> impl Iterator<Item = TypeId> + '_ {
        self.types().filter(move |&t| t != self.rule_state)
    }

    pub fn type_id(&self, name: &str) -> Result<TypeId, HierarchyError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| HierarchyError::UnknownType(name.to_string()))
    }

    pub fn type_name(&self, t: TypeId) -> &str {
        &self.names[t.index()]
    }

    pub fn feature_id(&self, name: &str) -> Result<FeatId, HierarchyError> {
        self.feat_by_name
            .get(name)
            .copied()
            .ok_or_else(|| HierarchyError::UnknownFeature(name.to_string()))
    }

    pub fn feature_name(&self, f: FeatId) -> &str {
        &self.features[f.index()]
    }

    pub fn parents(&self, t: TypeId) -> &[TypeId] {
        &self.parents[t.index()]
    }

    pub fn children(&self, t: TypeId) -> &[TypeId] {
        &self.children[t.index()]
    }

    /// True when `specific` is `general` or one of its subtypes.
    pub fn subsumes(&self, general: TypeId, specific: TypeId) -> bool {
        self.descendants[general.index()][specific.index()]
    }

    /// Greatest lower bound; `None` is bottom.
    pub fn glb(&self, a: TypeId, b: TypeId) -> Option<TypeId> {
        self.glb[a.index()][b.index()]
    }

    /// Name-based GLB lookup.
    pub fn glb_by_name(&self, a: &str, b: &str) -> Result<Option<&str>, HierarchyError> {
        let a = self.type_id(a)?;
        let b = self.type_id(b)?;
        Ok(self.glb(a, b).map(|t| self.type_name(t)))
    }

    /// Value constraint of `f` on `t`, if `f` is appropriate for `t`.
    pub fn approp(&self, t: TypeId, f: FeatId) -> Option<TypeId> {
        if self.open[t.index()] {
            return Some(self.top);
        }
        self.approp[t.index()].get(&f).copied()
    }

    /// All features appropriate for `t` with their value constraints.
    pub fn appropriate_features(&self, t: TypeId) -> &BTreeMap<FeatId, TypeId> {
        &self.approp[t.index()]
    }

    /// A type with no subtypes.
    pub fn is_leaf(&self, t: TypeId) -> bool {
        self.children[t.index()].is_empty()
    }
}

fn topo_order(
    names: &[String],
    parents: &[Vec<TypeId>],
    children: &[Vec<TypeId>],
) -> Result<Vec<TypeId>, HierarchyError> {
    let n = names.len();
    let mut indeg: Vec<usize> = parents.iter().map(|p| p.len()).collect();
    let mut ready: Vec<TypeId> = (0..n)
        .filter(|&i| indeg[i] == 0)
        .map(|i| TypeId(i as u32))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(t) = ready.pop() {
        order.push(t);
        for &c in &children[t.index()] {
            indeg[c.index()] -= 1;
            if indeg[c.index()] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() != n {
        let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
        return Err(HierarchyError::Cycle(names[stuck].clone()));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decls(edges: &[(&str, &str)]) -> HierarchyDecls {
        edges
            .iter()
            .fold(HierarchyDecls::default(), |d, (p, c)| d.edge(p, c))
    }

    #[test]
    fn disjoint_sisters_have_no_glb() {
        let h = TypeHierarchy::compile(&decls(&[
            ("top", "sign"),
            ("sign", "proper-name"),
            ("sign", "common-noun"),
            ("sign", "adjective"),
            ("sign", "verb"),
        ]))
        .unwrap();
        assert_eq!(h.glb_by_name("proper-name", "common-noun").unwrap(), None);
        assert_eq!(h.glb_by_name("proper-name", "adjective").unwrap(), None);
        assert_eq!(h.glb_by_name("sign", "verb").unwrap(), Some("verb"));
        assert_eq!(h.glb_by_name("verb", "verb").unwrap(), Some("verb"));
        assert_eq!(h.type_name(h.top()), "top");
    }

    #[test]
    fn diamond_is_accepted() {
        let h = TypeHierarchy::compile(&decls(&[
            ("top", "a"),
            ("top", "b"),
            ("a", "c"),
            ("b", "c"),
        ]))
        .unwrap();
        assert_eq!(h.glb_by_name("a", "b").unwrap(), Some("c"));
    }

    #[test]
    fn double_diamond_is_rejected() {
        let err = TypeHierarchy::compile(&decls(&[
            ("top", "a"),
            ("top", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
        ]))
        .unwrap_err();
        match err {
            HierarchyError::NonUniqueGlb { a, b, candidates } => {
                assert_eq!((a.as_str(), b.as_str()), ("a", "b"));
                assert_eq!(candidates, vec!["c".to_string(), "d".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn double_diamond_without_top_reports_multiple_tops() {
        let err = TypeHierarchy::compile(&decls(&[
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
        ]))
        .unwrap_err();
        assert!(matches!(err, HierarchyError::MultipleTops(_)));
    }

    #[test]
    fn cycles_are_rejected() {
        let err =
            TypeHierarchy::compile(&decls(&[("top", "a"), ("a", "b"), ("b", "a")])).unwrap_err();
        assert!(matches!(err, HierarchyError::Cycle(_)));
    }

    #[test]
    fn unknown_type_is_an_error() {
        let h = TypeHierarchy::compile(&decls(&[("top", "a")])).unwrap();
        assert_eq!(
            h.glb_by_name("a", "zz"),
            Err(HierarchyError::UnknownType("zz".into()))
        );
    }

    #[test]
    fn appropriateness_is_inherited_and_checked() {
        let d = decls(&[
            ("top", "sign"),
            ("sign", "verb"),
            ("top", "agr"),
            ("agr", "3sg"),
            ("agr", "3pl"),
        ])
        .feature("sign", "agr", "agr")
        .feature("verb", "agr", "3sg");
        let h = TypeHierarchy::compile(&d).unwrap();
        let verb = h.type_id("verb").unwrap();
        let agr = h.feature_id("agr").unwrap();
        assert_eq!(h.approp(verb, agr), Some(h.type_id("3sg").unwrap()));

        let bad = decls(&[("top", "sign"), ("sign", "verb"), ("top", "agr"), ("top", "other")])
            .feature("sign", "agr", "agr")
            .feature("verb", "agr", "other");
        assert!(matches!(
            TypeHierarchy::compile(&bad),
            Err(HierarchyError::Appropriateness { .. })
        ));
    }
}

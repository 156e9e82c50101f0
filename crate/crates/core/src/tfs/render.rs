//! Canonical one-line rendering of feature structures.
//!
//! `type[feat: value, ...]` with features in declaration order of their
//! interned ids. Nodes reached more than once are tagged: `#1=type[...]`
//! at the first occurrence and `#1` afterwards. Sub-structures at shrunk
//! paths are shown as a boxed type, `<type>`.

use std::collections::HashMap;

use super::fs::{FeatureStructure, FsGraph, NodeId};
use super::hierarchy::{FeatId, TypeHierarchy};

pub fn render(h: &TypeHierarchy, fs: &FeatureStructure, shrink: &[Vec<FeatId>]) -> String {
    render_roots(h, fs.graph(), &[fs.root()], shrink).pop().unwrap()
}

/// Renders several roots of one graph with a shared tag numbering.
pub fn render_roots(
    h: &TypeHierarchy,
    g: &FsGraph,
    roots: &[NodeId],
    shrink: &[Vec<FeatId>],
) -> Vec<String> {
    let mut indegree: HashMap<NodeId, usize> = HashMap::new();
    let mut seen = vec![false; g.nodes().len()];
    for &r in roots {
        *indegree.entry(r).or_default() += 1;
        count(g, r, &mut indegree, &mut seen);
    }
    let mut r = Renderer {
        h,
        g,
        shrink,
        indegree,
        tags: HashMap::new(),
    };
    roots
        .iter()
        .map(|&root| {
            let mut out = String::new();
            let mut path = Vec::new();
            r.node(root, &mut path, &mut out);
            out
        })
        .collect()
}

fn count(g: &FsGraph, n: NodeId, indeg: &mut HashMap<NodeId, usize>, seen: &mut [bool]) {
    if seen[n] {
        return;
    }
    seen[n] = true;
    for &(_, c) in &g.node(n).feats {
        *indeg.entry(c).or_default() += 1;
        count(g, c, indeg, seen);
    }
}

struct Renderer<'a> {
    h: &'a TypeHierarchy,
    g: &'a FsGraph,
    shrink: &'a [Vec<FeatId>],
    indegree: HashMap<NodeId, usize>,
    tags: HashMap<NodeId, usize>,
}

impl Renderer<'_> {
    fn node(&mut self, n: NodeId, path: &mut Vec<FeatId>, out: &mut String) {
        if let Some(t) = self.tags.get(&n) {
            out.push_str(&format!("#{t}"));
            return;
        }
        if self.indegree.get(&n).copied().unwrap_or(0) > 1 {
            let t = self.tags.len() + 1;
            self.tags.insert(n, t);
            out.push_str(&format!("#{t}="));
        }
        let node = self.g.node(n);
        let name = self.h.type_name(node.ty);
        if self.shrink.iter().any(|p| p == path) {
            out.push('<');
            out.push_str(name);
            out.push('>');
            return;
        }
        out.push_str(name);
        if node.feats.is_empty() {
            return;
        }
        out.push('[');
        for (i, &(f, c)) in node.feats.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(self.h.feature_name(f));
            out.push_str(": ");
            path.push(f);
            self.node(c, path, out);
            path.pop();
        }
        out.push(']');
    }
}

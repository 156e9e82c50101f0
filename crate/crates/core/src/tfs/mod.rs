//! Typed feature structures: hierarchy, unification, rendering.

pub mod fs;
pub mod hierarchy;
pub mod render;

pub use fs::{build, parse_path, subsumes, unify, FeatureStructure, FsGraph, Node, NodeId, Workspace};
pub use hierarchy::{FeatId, HierarchyDecls, HierarchyError, TypeHierarchy, TypeId};
pub use render::{render, render_roots};

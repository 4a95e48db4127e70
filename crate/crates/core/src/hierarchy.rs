//! Pairwise overlap classification and the containment polyhierarchy.

use std::fmt::Write as _;

use crate::community::Community;
use crate::graph::{Graph, LinkSet, NodeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OverlapKind {
    Disjoint,
    /// One node set contains the other.
    Nested,
    /// Every shared node is a boundary node of both communities.
    BoundaryOverlap,
    /// Some shared node is an inner node of at least one community.
    Permeating,
}

impl OverlapKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OverlapKind::Disjoint => "disjoint",
            OverlapKind::Nested => "nested",
            OverlapKind::BoundaryOverlap => "boundary-overlap",
            OverlapKind::Permeating => "permeating",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapRelation {
    pub kind: OverlapKind,
    pub shared_nodes: NodeSet,
    /// L(a) ∩ L(b).
    pub shared_links: LinkSet,
}

pub fn classify_overlap(g: &Graph, a: &Community, b: &Community) -> OverlapRelation {
    let shared_nodes = a.nodes.intersection(&b.nodes);
    let shared_links = g.induced_links(&shared_nodes);
    let kind = if shared_nodes.is_empty() {
        OverlapKind::Disjoint
    } else if a.nodes.is_subset(&b.nodes) || b.nodes.is_subset(&a.nodes) {
        OverlapKind::Nested
    } else if shared_nodes.is_subset(&a.boundary) && shared_nodes.is_subset(&b.boundary) {
        OverlapKind::BoundaryOverlap
    } else {
        OverlapKind::Permeating
    };
    OverlapRelation { kind, shared_nodes, shared_links }
}

/// True iff the two communities together cover every node.
pub fn cover_check(g: &Graph, a: &Community, b: &Community) -> bool {
    a.nodes.union_len(&b.nodes) == g.node_count()
}

/// Containment DAG. Vertex 0 is the whole graph; vertex `i + 1` is
/// community `i` of the input list.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhierarchyDag {
    pub names: Vec<String>,
    pub node_sets: Vec<NodeSet>,
    /// `(parent, child)` pairs of direct containment, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl PolyhierarchyDag {
    pub fn parents(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.edges.binary_search(&(parent, child)).is_ok()
    }

    /// Every vertex other than the root has exactly one parent.
    pub fn is_tree(&self) -> bool {
        (1..self.names.len()).all(|v| self.parents(v).len() == 1)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph polyhierarchy {\n  rankdir=TB;\n");
        for (v, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "  \"{name}\" [label=\"{name}\\n{} nodes\"];", self.node_sets[v].len());
        }
        for &(p, c) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.names[p], self.names[c]);
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the transitive reduction of strict containment over the
/// communities plus the whole graph as root `C0`. Communities equal to the
/// whole node set are folded into the root.
pub fn build_polyhierarchy(g: &Graph, communities: &[Community], names: &[String]) -> PolyhierarchyDag {
    assert_eq!(communities.len(), names.len(), "one name per community");
    let all = g.all_nodes();
    let mut vnames = vec!["C0".to_string()];
    let mut sets = vec![all.clone()];
    for (c, name) in communities.iter().zip(names) {
        if c.nodes != all {
            vnames.push(name.clone());
            sets.push(c.nodes.clone());
        }
    }
    let strict = |a: usize, b: usize| sets[b] != sets[a] && sets[b].is_subset(&sets[a]);
    let mut edges = Vec::new();
    for p in 0..sets.len() {
        for c in 0..sets.len() {
            if p == c || !strict(p, c) {
                continue;
            }
            let direct = (0..sets.len()).all(|m| m == p || m == c || !(strict(p, m) && strict(m, c)));
            if direct {
                edges.push((p, c));
            }
        }
    }
    edges.sort_unstable();
    PolyhierarchyDag { names: vnames, node_sets: sets, edges }
}

/// `C1`, `C2`, ... in list order.
pub fn default_names(count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("C{i}")).collect()
}

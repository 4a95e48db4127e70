//! Undirected weighted graph, node/link sets and the structural queries the
//! rest of the crate builds on.
//!
//! Nodes carry arbitrary string labels that are mapped to dense indices in
//! order of first appearance. Links are numbered in order of first
//! appearance as well; each link stores its endpoints with `source < target`
//! by index.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type LinkId = usize;

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident, $id:ty) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            bits: FixedBitSet,
        }

        impl $name {
            /// Empty set over a universe of `universe` elements.
            pub fn new(universe: usize) -> Self {
                Self { bits: FixedBitSet::with_capacity(universe) }
            }

            /// Set holding every element of the universe.
            pub fn full(universe: usize) -> Self {
                let mut bits = FixedBitSet::with_capacity(universe);
                bits.insert_range(..);
                Self { bits }
            }

            pub fn from_ids<I: IntoIterator<Item = $id>>(universe: usize, ids: I) -> Self {
                let mut set = Self::new(universe);
                for id in ids {
                    set.insert(id);
                }
                set
            }

            pub fn universe(&self) -> usize {
                self.bits.len()
            }

            /// Returns true if the element was newly inserted.
            pub fn insert(&mut self, id: $id) -> bool {
                !self.bits.put(id)
            }

            /// Returns true if the element was present.
            pub fn remove(&mut self, id: $id) -> bool {
                let present = self.bits.contains(id);
                self.bits.set(id, false);
                present
            }

            #[inline]
            pub fn contains(&self, id: $id) -> bool {
                self.bits.contains(id)
            }

            pub fn len(&self) -> usize {
                self.bits.count_ones(..)
            }

            pub fn is_empty(&self) -> bool {
                self.bits.is_clear()
            }

            /// Members in ascending id order.
            pub fn iter(&self) -> impl Iterator<Item = $id> + '_ {
                self.bits.ones()
            }

            pub fn to_vec(&self) -> Vec<$id> {
                self.iter().collect()
            }

            pub fn union(&self, other: &Self) -> Self {
                let mut bits = self.bits.clone();
                bits.union_with(&other.bits);
                Self { bits }
            }

            pub fn intersection(&self, other: &Self) -> Self {
                let mut bits = self.bits.clone();
                bits.intersect_with(&other.bits);
                Self { bits }
            }

            pub fn difference(&self, other: &Self) -> Self {
                let mut bits = self.bits.clone();
                bits.difference_with(&other.bits);
                Self { bits }
            }

            pub fn union_len(&self, other: &Self) -> usize {
                self.bits.union_count(&other.bits)
            }

            pub fn intersection_len(&self, other: &Self) -> usize {
                self.bits.intersection_count(&other.bits)
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.bits.is_subset(&other.bits)
            }

            pub fn is_disjoint(&self, other: &Self) -> bool {
                self.bits.is_disjoint(&other.bits)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

index_set!(
    /// Set of node indices with O(1) membership.
    NodeSet,
    NodeId
);
index_set!(
    /// Set of link ids with O(1) membership.
    LinkSet,
    LinkId
);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
}

impl Link {
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.source {
            self.target
        } else {
            self.source
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub node: NodeId,
    pub weight: f64,
    pub link: LinkId,
}

/// Immutable undirected graph with positive link weights and no self-loops.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    adjacency: Vec<Vec<Neighbor>>,
    links: Vec<Link>,
    degrees: Vec<f64>,
    label_rank: Vec<usize>,
    weighted: bool,
}

/// Non-fatal observation made while reading an edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub warnings: Vec<ParseWarning>,
}

/// Orders labels numerically when both parse as integers, otherwise
/// lexicographically; integers sort before other labels.
pub fn natural_label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Incremental constructor; duplicate links are merged.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    links: Vec<Link>,
    link_index: HashMap<(NodeId, NodeId), LinkId>,
}

/// What happened to a link passed to [`GraphBuilder::add_link`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkInsert {
    New(LinkId),
    Duplicate(LinkId),
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    /// Adds `weight` to the link between `u` and `v`, creating it if needed.
    pub fn add_link(&mut self, u: &str, v: &str, weight: f64) -> Result<LinkInsert> {
        if u == v {
            return Err(Error::SelfLoop { line: 0, label: u.to_string() });
        }
        if weight.is_nan() || weight <= 0.0 || weight.is_infinite() {
            return Err(Error::NonPositiveWeight { line: 0, weight: weight.to_string() });
        }
        let (a, b) = (self.node(u), self.node(v));
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.link_index.get(&key) {
            self.links[id].weight += weight;
            return Ok(LinkInsert::Duplicate(id));
        }
        let id = self.links.len();
        self.links.push(Link { source: key.0, target: key.1, weight });
        self.link_index.insert(key, id);
        Ok(LinkInsert::New(id))
    }

    pub fn build(self) -> Graph {
        let n = self.labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut degrees = vec![0.0; n];
        for (id, link) in self.links.iter().enumerate() {
            adjacency[link.source].push(Neighbor { node: link.target, weight: link.weight, link: id });
            adjacency[link.target].push(Neighbor { node: link.source, weight: link.weight, link: id });
            degrees[link.source] += link.weight;
            degrees[link.target] += link.weight;
        }
        for list in &mut adjacency {
            list.sort_by_key(|nb| nb.node);
        }
        let mut order: Vec<NodeId> = (0..n).collect();
        order.sort_by(|&a, &b| natural_label_cmp(&self.labels[a], &self.labels[b]));
        let mut label_rank = vec![0; n];
        for (rank, node) in order.into_iter().enumerate() {
            label_rank[node] = rank;
        }
        let weighted = self.links.iter().any(|l| l.weight != 1.0);
        Graph { labels: self.labels, index: self.index, adjacency, links: self.links, degrees, label_rank, weighted }
    }
}

/// Parses a whitespace-delimited edge list (`u v` or `u v w`, `#` comments).
///
/// With `weighted == false` every link gets weight 1, any third column is
/// ignored, and repeated pairs collapse onto one link. With `weighted ==
/// true` repeated pairs are merged by summing their weights.
pub fn load_edge_list(text: &str, weighted: bool) -> Result<LoadedGraph> {
    let mut builder = GraphBuilder::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 {
            return Err(Error::Parse { line, reason: format!("expected at least 2 tokens, got {}", tokens.len()) });
        }
        let (u, v) = (tokens[0], tokens[1]);
        if u == v {
            return Err(Error::SelfLoop { line, label: u.to_string() });
        }
        let weight = if weighted {
            if tokens.len() > 3 {
                return Err(Error::Parse { line, reason: format!("expected at most 3 tokens, got {}", tokens.len()) });
            }
            match tokens.get(2) {
                None => 1.0,
                Some(tok) => {
                    let w: f64 =
                        tok.parse().map_err(|_| Error::Parse { line, reason: format!("invalid weight {tok:?}") })?;
                    if !w.is_finite() {
                        return Err(Error::Parse { line, reason: format!("invalid weight {tok:?}") });
                    }
                    if w <= 0.0 {
                        return Err(Error::NonPositiveWeight { line, weight: tok.to_string() });
                    }
                    w
                }
            }
        } else {
            1.0
        };
        let outcome = if weighted {
            builder.add_link(u, v, weight)?
        } else {
            // Collapse repeats without touching the unit weight.
            let (a, b) = (builder.node(u), builder.node(v));
            match builder.link_index.get(&(a.min(b), a.max(b))) {
                Some(&id) => LinkInsert::Duplicate(id),
                None => builder.add_link(u, v, weight)?,
            }
        };
        if let LinkInsert::Duplicate(id) = outcome {
            let message = if weighted {
                format!("duplicate link ({u}, {v}) merged, weight now {}", builder.links[id].weight)
            } else {
                format!("duplicate link ({u}, {v}) ignored")
            };
            log::warn!("line {line}: {message}");
            warnings.push(ParseWarning { line, message });
        }
    }
    Ok(LoadedGraph { graph: builder.build(), warnings })
}

impl Graph {
    /// Unweighted graph from index pairs over nodes labelled `0..n`.
    pub fn from_pairs(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut builder = GraphBuilder::new();
        for i in 0..n {
            builder.node(&i.to_string());
        }
        for &(u, v) in pairs {
            let (u, v) = (u.to_string(), v.to_string());
            let (a, b) = (builder.node(&u), builder.node(&v));
            if !builder.link_index.contains_key(&(a.min(b), a.max(b))) {
                builder.add_link(&u, &v, 1.0)?;
            }
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn nodes_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<NodeSet> {
        let mut set = self.empty_nodes();
        for label in labels {
            set.insert(self.node(label.as_ref())?);
        }
        Ok(set)
    }

    /// Position of the node's label in natural label order; used for
    /// deterministic tie-breaking and sorted output.
    pub fn label_rank(&self, node: NodeId) -> usize {
        self.label_rank[node]
    }

    pub fn sorted_labels(&self, nodes: &NodeSet) -> Vec<String> {
        let mut ids = nodes.to_vec();
        ids.sort_by_key(|&i| self.label_rank[i]);
        ids.into_iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn degree(&self, node: NodeId) -> f64 {
        self.degrees[node]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn neighbors(&self, node: NodeId) -> &[Neighbor] {
        &self.adjacency[node]
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_between(&self, u: NodeId, v: NodeId) -> Option<LinkId> {
        self.adjacency[u].binary_search_by_key(&v, |nb| nb.node).ok().map(|pos| self.adjacency[u][pos].link)
    }

    pub fn link_by_labels(&self, u: &str, v: &str) -> Result<LinkId> {
        let (a, b) = (self.node(u)?, self.node(v)?);
        self.link_between(a, b).ok_or_else(|| Error::UnknownLink(u.to_string(), v.to_string()))
    }

    /// Endpoint labels of a link, ordered naturally.
    pub fn link_labels(&self, id: LinkId) -> (String, String) {
        let l = &self.links[id];
        let (a, b) = if self.label_rank[l.source] <= self.label_rank[l.target] {
            (l.source, l.target)
        } else {
            (l.target, l.source)
        };
        (self.labels[a].clone(), self.labels[b].clone())
    }

    pub fn empty_nodes(&self) -> NodeSet {
        NodeSet::new(self.node_count())
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count())
    }

    pub fn empty_links(&self) -> LinkSet {
        LinkSet::new(self.link_count())
    }

    /// k_i^in(C): total weight from `node` to members of `c`.
    pub fn internal_degree(&self, node: NodeId, c: &NodeSet) -> f64 {
        self.adjacency[node].iter().filter(|nb| c.contains(nb.node)).map(|nb| nb.weight).sum()
    }

    /// The maximal link set L(C): every link with both endpoints in `c`.
    pub fn induced_links(&self, c: &NodeSet) -> LinkSet {
        let mut out = self.empty_links();
        for i in c.iter() {
            for nb in &self.adjacency[i] {
                if nb.node > i && c.contains(nb.node) {
                    out.insert(nb.link);
                }
            }
        }
        out
    }

    /// C(L): every node attached to a link in `l`.
    pub fn induced_nodes(&self, l: &LinkSet) -> NodeSet {
        let mut out = self.empty_nodes();
        for k in l.iter() {
            out.insert(self.links[k].source);
            out.insert(self.links[k].target);
        }
        out
    }

    /// Nodes outside `c` adjacent to at least one member.
    pub fn neighbors_of_set(&self, c: &NodeSet) -> NodeSet {
        let mut out = self.empty_nodes();
        for i in c.iter() {
            for nb in &self.adjacency[i] {
                if !c.contains(nb.node) {
                    out.insert(nb.node);
                }
            }
        }
        out
    }

    /// Members with at least one link leaving `c`.
    pub fn boundary_nodes(&self, c: &NodeSet) -> NodeSet {
        let mut out = self.empty_nodes();
        for i in c.iter() {
            if self.adjacency[i].iter().any(|nb| !c.contains(nb.node)) {
                out.insert(i);
            }
        }
        out
    }

    /// Whether the subgraph induced by `c` is connected. Empty sets are not.
    pub fn is_connected(&self, c: &NodeSet) -> bool {
        let Some(start) = c.iter().next() else {
            return false;
        };
        self.reach_within(start, c).len() == c.len()
    }

    fn reach_within(&self, start: NodeId, c: &NodeSet) -> NodeSet {
        let mut seen = self.empty_nodes();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for nb in &self.adjacency[u] {
                if c.contains(nb.node) && seen.insert(nb.node) {
                    stack.push(nb.node);
                }
            }
        }
        seen
    }

    /// Connected component containing `node`.
    pub fn component_of(&self, node: NodeId) -> NodeSet {
        self.reach_within(node, &self.all_nodes())
    }

    /// Connected components, ordered by smallest member index.
    pub fn components(&self) -> Vec<NodeSet> {
        let mut assigned = self.empty_nodes();
        let mut out = Vec::new();
        for v in 0..self.node_count() {
            if !assigned.contains(v) {
                let comp = self.component_of(v);
                assigned = assigned.union(&comp);
                out.push(comp);
            }
        }
        out
    }

    pub fn is_connected_graph(&self) -> bool {
        self.node_count() > 0 && self.components().len() == 1
    }

    /// Cut vertices of the subgraph induced by `c` (iterative Tarjan).
    pub fn articulation_points(&self, c: &NodeSet) -> NodeSet {
        let n = self.node_count();
        let mut out = self.empty_nodes();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        for root in c.iter() {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (node, parent, next adjacency position)
            let mut stack: Vec<(NodeId, NodeId, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(frame) = stack.last_mut() {
                let (u, parent, pos) = *frame;
                if pos < self.adjacency[u].len() {
                    frame.2 += 1;
                    let w = self.adjacency[u][pos].node;
                    if !c.contains(w) || w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= disc[parent] {
                            out.insert(parent);
                        }
                    }
                }
            }
            if root_children > 1 {
                out.insert(root);
            }
        }
        out
    }

    /// Serialises back to the edge-list format accepted by [`load_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for id in 0..self.link_count() {
            let (u, v) = self.link_labels(id);
            if self.weighted {
                out.push_str(&format!("{u} {v} {}\n", self.links[id].weight));
            } else {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
        out
    }
}

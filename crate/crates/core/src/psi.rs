//! The normalised node cut Ψ and its incremental maintenance.
//!
//! For a node set C with internal degree k_in(C) = Σ_{i∈C} k_i^in(C),
//!
//! ```text
//! Ψ(C) = σ(C) / k_in(C),    σ(C) = Σ_{i∈C} k_i^in(C) · k_i^out(C) / k_i
//! ```
//!
//! Only boundary members (k_i^out > 0) contribute to σ. [`SubgraphState`]
//! caches the per-node degrees so that adding or removing one node updates
//! σ and k_in in O(deg) time.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

/// σ(C) and k_in(C) evaluated directly from the definition.
pub fn sigma_and_internal_degree(g: &Graph, c: &NodeSet) -> (f64, f64) {
    let mut sigma = 0.0;
    let mut k_in = 0.0;
    for i in c.iter() {
        let k_i = g.degree(i);
        let inside = g.internal_degree(i, c);
        let outside = k_i - inside;
        k_in += inside;
        sigma += inside * outside / k_i;
    }
    (sigma, k_in)
}

/// Ψ(C) from scratch.
pub fn psi(g: &Graph, c: &NodeSet) -> Result<f64> {
    let (sigma, k_in) = sigma_and_internal_degree(g, c);
    if k_in <= 0.0 {
        return Err(Error::ZeroInternalDegree);
    }
    Ok(sigma / k_in)
}

/// Mutable connected-subgraph tracker with cached degrees, σ and k_in.
///
/// `in_deg` and `out_deg` are kept for every node of the graph, so the
/// frontier's internal degrees are available without a scan.
#[derive(Debug, Clone)]
pub struct SubgraphState<'g> {
    graph: &'g Graph,
    members: NodeSet,
    frontier: NodeSet,
    in_deg: Vec<f64>,
    out_deg: Vec<f64>,
    member_nbrs: Vec<u32>,
    internal_links: usize,
    k_in_total: f64,
    sigma: f64,
}

impl<'g> SubgraphState<'g> {
    pub fn new(graph: &'g Graph, c: &NodeSet) -> Result<Self> {
        let mut state = Self {
            graph,
            members: c.clone(),
            frontier: graph.empty_nodes(),
            in_deg: vec![0.0; graph.node_count()],
            out_deg: graph.degrees().to_vec(),
            member_nbrs: vec![0; graph.node_count()],
            internal_links: 0,
            k_in_total: 0.0,
            sigma: 0.0,
        };
        state.recompute();
        if state.internal_links == 0 {
            return Err(Error::ZeroInternalDegree);
        }
        Ok(state)
    }

    /// Rebuilds every cached quantity from the member set.
    pub fn recompute(&mut self) {
        let g = self.graph;
        self.in_deg.iter_mut().for_each(|x| *x = 0.0);
        self.member_nbrs.iter_mut().for_each(|x| *x = 0);
        self.frontier = g.empty_nodes();
        let mut doubled_links = 0;
        for i in self.members.iter() {
            for nb in g.neighbors(i) {
                self.in_deg[nb.node] += nb.weight;
                self.member_nbrs[nb.node] += 1;
                if self.members.contains(nb.node) {
                    doubled_links += 1;
                } else {
                    self.frontier.insert(nb.node);
                }
            }
        }
        self.internal_links = doubled_links / 2;
        let mut sigma = 0.0;
        let mut k_in = 0.0;
        for v in 0..g.node_count() {
            self.out_deg[v] = g.degree(v) - self.in_deg[v];
            if self.members.contains(v) {
                k_in += self.in_deg[v];
                sigma += self.in_deg[v] * self.out_deg[v] / g.degree(v);
            }
        }
        self.sigma = sigma;
        self.k_in_total = k_in;
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn members(&self) -> &NodeSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.contains(node)
    }

    /// Non-members adjacent to at least one member.
    pub fn frontier(&self) -> &NodeSet {
        &self.frontier
    }

    /// k_i^in(C), defined for members and non-members alike.
    pub fn in_degree(&self, node: NodeId) -> f64 {
        self.in_deg[node]
    }

    /// k_i^out(C).
    pub fn out_degree(&self, node: NodeId) -> f64 {
        self.out_deg[node]
    }

    pub fn internal_link_count(&self) -> usize {
        self.internal_links
    }

    pub fn k_in_total(&self) -> f64 {
        self.k_in_total
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn psi(&self) -> f64 {
        self.sigma / self.k_in_total
    }

    /// σ(C ∪ i) − σ(C) for a frontier node i.
    pub fn delta_sigma_add(&self, node: NodeId) -> Result<f64> {
        if self.members.contains(node) || !self.frontier.contains(node) {
            return Err(Error::NotANeighbor(self.graph.label(node).to_string()));
        }
        let g = self.graph;
        let mut sum = 0.0;
        for nb in g.neighbors(node) {
            if self.members.contains(nb.node) {
                sum += nb.weight * (2.0 * self.out_deg[nb.node] - nb.weight) / g.degree(nb.node);
            }
        }
        let inside = self.in_deg[node];
        Ok(sum - inside * inside / g.degree(node))
    }

    /// σ(C ∖ i) − σ(C) for a member i.
    pub fn delta_sigma_remove(&self, node: NodeId) -> Result<f64> {
        if !self.members.contains(node) {
            return Err(Error::NotAMember(self.graph.label(node).to_string()));
        }
        let g = self.graph;
        let mut sum = 0.0;
        for nb in g.neighbors(node) {
            if self.members.contains(nb.node) {
                sum += nb.weight * (2.0 * self.out_deg[nb.node] + nb.weight) / g.degree(nb.node);
            }
        }
        let inside = self.in_deg[node];
        Ok(inside * inside / g.degree(node) - sum)
    }

    /// Ψ(C ∪ i) without modifying the state.
    pub fn psi_after_add(&self, node: NodeId) -> Result<f64> {
        let d = self.delta_sigma_add(node)?;
        Ok((self.sigma + d) / (self.k_in_total + 2.0 * self.in_deg[node]))
    }

    /// Ψ(C ∖ i) without modifying the state.
    pub fn psi_after_remove(&self, node: NodeId) -> Result<f64> {
        let d = self.delta_sigma_remove(node)?;
        if self.internal_links == self.member_nbrs[node] as usize {
            return Err(Error::ZeroInternalDegree);
        }
        Ok((self.sigma + d) / (self.k_in_total - 2.0 * self.in_deg[node]))
    }

    pub fn apply_add(&mut self, node: NodeId) -> Result<()> {
        let d = self.delta_sigma_add(node)?;
        let g = self.graph;
        self.sigma += d;
        self.k_in_total += 2.0 * self.in_deg[node];
        self.internal_links += self.member_nbrs[node] as usize;
        self.members.insert(node);
        self.frontier.remove(node);
        for nb in g.neighbors(node) {
            self.in_deg[nb.node] += nb.weight;
            self.out_deg[nb.node] -= nb.weight;
            self.member_nbrs[nb.node] += 1;
            if !self.members.contains(nb.node) {
                self.frontier.insert(nb.node);
            }
        }
        Ok(())
    }

    pub fn apply_remove(&mut self, node: NodeId) -> Result<()> {
        let d = self.delta_sigma_remove(node)?;
        if self.internal_links == self.member_nbrs[node] as usize {
            return Err(Error::ZeroInternalDegree);
        }
        let g = self.graph;
        self.sigma += d;
        self.k_in_total -= 2.0 * self.in_deg[node];
        self.internal_links -= self.member_nbrs[node] as usize;
        self.members.remove(node);
        if self.member_nbrs[node] > 0 {
            self.frontier.insert(node);
        }
        for nb in g.neighbors(node) {
            self.in_deg[nb.node] -= nb.weight;
            self.out_deg[nb.node] += nb.weight;
            self.member_nbrs[nb.node] -= 1;
            if self.member_nbrs[nb.node] == 0 {
                self.frontier.remove(nb.node);
            }
        }
        Ok(())
    }
}

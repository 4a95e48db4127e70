use crate::error::Result;
use crate::graph::{Graph, LinkId, LinkSet, NodeSet};
use crate::psi;

/// A frozen local minimum of Ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct Community {
    pub nodes: NodeSet,
    /// L(C), the maximal link set.
    pub links: LinkSet,
    /// Ψ recomputed from scratch.
    pub psi: f64,
    pub boundary: NodeSet,
    /// Number of seed runs that recorded this community.
    pub seed_count: usize,
    /// Seed links whose runs recorded it, ascending.
    pub seeds: Vec<LinkId>,
    pub stability: Option<f64>,
}

impl Community {
    pub fn from_nodes(g: &Graph, nodes: NodeSet) -> Result<Self> {
        let psi = psi::psi(g, &nodes)?;
        Ok(Self {
            links: g.induced_links(&nodes),
            boundary: g.boundary_nodes(&nodes),
            nodes,
            psi,
            seed_count: 0,
            seeds: Vec::new(),
            stability: None,
        })
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Members that are not boundary nodes.
    pub fn inner(&self) -> NodeSet {
        self.nodes.difference(&self.boundary)
    }
}

/// Sorts by Ψ ascending, then larger communities first, then by members.
pub fn sort_communities(list: &mut [Community]) {
    list.sort_by(|a, b| {
        a.psi
            .total_cmp(&b.psi)
            .then_with(|| b.nodes.len().cmp(&a.nodes.len()))
            .then_with(|| a.nodes.to_vec().cmp(&b.nodes.to_vec()))
    });
}

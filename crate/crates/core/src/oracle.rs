//! Exhaustive Ψ-landscape for small graphs, plus the checks that work at any
//! scale: the local-minimum certificate, Jaccard distance and stability.
//!
//! A place in the landscape is a connected node set with at least one
//! internal link. Two places are related when one is obtained from the other
//! by adding a single node.

use std::collections::HashMap;

use crate::community::{sort_communities, Community};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::greedy::PSI_TOLERANCE;
use crate::psi::{self, SubgraphState};

/// Default node-count cap for exhaustive enumeration.
pub const DEFAULT_NODE_CAP: usize = 16;

fn check_cap(g: &Graph, cap: Option<usize>) -> Result<()> {
    if let Some(cap) = cap {
        if g.node_count() > cap {
            return Err(Error::TooLarge { n: g.node_count(), cap });
        }
    }
    Ok(())
}

/// Calls `visit` once for every connected node set with at least two nodes.
///
/// Each set is grown from its smallest node; the extension only admits nodes
/// above the root that are not yet adjacent to the current set, so no set is
/// produced twice.
pub fn visit_connected_subgraphs<F: FnMut(&NodeSet)>(g: &Graph, mut visit: F) {
    let n = g.node_count();
    for root in 0..n {
        let mut current = NodeSet::from_ids(n, [root]);
        let mut reach = current.clone();
        let mut extension = Vec::new();
        for nb in g.neighbors(root) {
            reach.insert(nb.node);
            if nb.node > root {
                extension.push(nb.node);
            }
        }
        extend(g, root, &mut current, &reach, extension, &mut visit);
    }
}

fn extend<F: FnMut(&NodeSet)>(
    g: &Graph,
    root: NodeId,
    current: &mut NodeSet,
    reach: &NodeSet,
    mut extension: Vec<NodeId>,
    visit: &mut F,
) {
    if current.len() >= 2 {
        visit(current);
    }
    while let Some(w) = extension.pop() {
        let mut next_ext = extension.clone();
        let mut next_reach = reach.clone();
        for nb in g.neighbors(w) {
            if !reach.contains(nb.node) {
                next_reach.insert(nb.node);
                if nb.node > root {
                    next_ext.push(nb.node);
                }
            }
        }
        current.insert(w);
        extend(g, root, current, &next_reach, next_ext, visit);
        current.remove(w);
    }
}

/// All connected node sets with k_in > 0. `cap` bounds the node count;
/// `None` lifts the bound.
pub fn enumerate_connected_subgraphs(g: &Graph, cap: Option<usize>) -> Result<Vec<NodeSet>> {
    check_cap(g, cap)?;
    let mut out = Vec::new();
    visit_connected_subgraphs(g, |c| out.push(c.clone()));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LandscapePlace {
    pub nodes: NodeSet,
    pub psi: f64,
    /// Places reached by adding one node.
    pub up: Vec<usize>,
    /// Places reached by removing one node.
    pub down: Vec<usize>,
}

/// The complete Ψ-landscape of a small graph.
#[derive(Debug, Clone)]
pub struct Landscape {
    pub places: Vec<LandscapePlace>,
    index: HashMap<NodeSet, usize>,
}

impl Landscape {
    pub fn build(g: &Graph, cap: Option<usize>) -> Result<Self> {
        let sets = enumerate_connected_subgraphs(g, cap)?;
        let mut places = Vec::with_capacity(sets.len());
        let mut index = HashMap::with_capacity(sets.len());
        for (id, nodes) in sets.into_iter().enumerate() {
            let psi = psi::psi(g, &nodes)?;
            index.insert(nodes.clone(), id);
            places.push(LandscapePlace { nodes, psi, up: Vec::new(), down: Vec::new() });
        }
        for id in 0..places.len() {
            let nodes = places[id].nodes.clone();
            for v in g.neighbors_of_set(&nodes).iter() {
                let mut bigger = nodes.clone();
                bigger.insert(v);
                let other = index[&bigger];
                places[id].up.push(other);
                places[other].down.push(id);
            }
        }
        for p in &mut places {
            p.down.sort_unstable();
        }
        Ok(Self { places, index })
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn place(&self, nodes: &NodeSet) -> Option<&LandscapePlace> {
        self.index.get(nodes).map(|&i| &self.places[i])
    }

    /// Places whose neighbours all have Ψ no lower than their own.
    pub fn local_minima(&self) -> impl Iterator<Item = &LandscapePlace> {
        self.places
            .iter()
            .filter(move |p| p.up.iter().chain(&p.down).all(|&q| self.places[q].psi >= p.psi - PSI_TOLERANCE))
    }
}

/// Exact local minima, whole components excluded, sorted by Ψ.
pub fn exact_local_minima(g: &Graph, cap: Option<usize>) -> Result<Vec<Community>> {
    let landscape = Landscape::build(g, cap)?;
    let mut out = Vec::new();
    for place in landscape.local_minima() {
        if place.up.is_empty() {
            continue;
        }
        out.push(Community::from_nodes(g, place.nodes.clone())?);
    }
    sort_communities(&mut out);
    Ok(out)
}

/// True iff no single addition and no connectivity-preserving single removal
/// lowers Ψ(c) by more than the tolerance. `c` must be connected.
pub fn verify_local_minimum(g: &Graph, c: &NodeSet) -> Result<bool> {
    let s = SubgraphState::new(g, c)?;
    let current = s.psi();
    for i in s.frontier().iter() {
        if s.psi_after_add(i)? < current - PSI_TOLERANCE {
            return Ok(false);
        }
    }
    let cut = g.articulation_points(c);
    for i in c.iter().filter(|&i| !cut.contains(i)) {
        match s.psi_after_remove(i) {
            Ok(p) if p < current - PSI_TOLERANCE => return Ok(false),
            Ok(_) | Err(Error::ZeroInternalDegree) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// (|M ∪ N| − |M ∩ N|) / |M ∪ N|.
pub fn jaccard_distance(m: &NodeSet, n: &NodeSet) -> Result<f64> {
    let union = m.union_len(n);
    if union == 0 {
        return Err(Error::EmptyUnion);
    }
    let inter = m.intersection_len(n);
    Ok((union - inter) as f64 / union as f64)
}

/// Shortest Jaccard distance from `target` to a community with lower Ψ.
pub fn stability(target: &Community, all: &[Community]) -> Result<f64> {
    all.iter()
        .filter(|c| c.psi < target.psi - PSI_TOLERANCE)
        .map(|c| jaccard_distance(&target.nodes, &c.nodes))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .min_by(f64::total_cmp)
        .ok_or(Error::NoLowerCommunity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::karate;
    use crate::graph::load_edge_list;

    fn set(g: &Graph, labels: &[&str]) -> NodeSet {
        g.nodes_from_labels(labels).unwrap()
    }

    #[test]
    fn triangle_has_four_places() {
        let g = load_edge_list("a b\nb c\nc a", false).unwrap().graph;
        let sets = enumerate_connected_subgraphs(&g, None).unwrap();
        assert_eq!(sets.len(), 4);
    }

    #[test]
    fn path_places_and_minima() {
        let g = load_edge_list("1 2\n2 3", false).unwrap().graph;
        let mut sets: Vec<Vec<String>> =
            enumerate_connected_subgraphs(&g, None).unwrap().iter().map(|c| g.sorted_labels(c)).collect();
        sets.sort();
        assert_eq!(sets, vec![vec!["1", "2"], vec!["1", "2", "3"], vec!["2", "3"]]);
        assert!(exact_local_minima(&g, None).unwrap().is_empty());
    }

    #[test]
    fn two_bridged_triangles() {
        let g = load_edge_list("a b\nb c\nc a\nc d\nd e\ne f\nf d", false).unwrap().graph;
        let minima = exact_local_minima(&g, None).unwrap();
        let found: Vec<Vec<String>> = minima.iter().map(|c| g.sorted_labels(&c.nodes)).collect();
        // Each triangle together with the far end of the bridge; values
        // frozen from a brute-force scan of all 2^6 subsets.
        assert_eq!(found.len(), 2, "{found:?}");
        assert!(found.contains(&vec!["a".into(), "b".into(), "c".into(), "d".into()]));
        assert!(found.contains(&vec!["c".into(), "d".into(), "e".into(), "f".into()]));
        for c in &minima {
            assert!((c.psi - 1.0 / 12.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = karate();
        assert_eq!(enumerate_connected_subgraphs(&g, Some(16)).unwrap_err(), Error::TooLarge { n: 34, cap: 16 });
        assert!(exact_local_minima(&g, Some(DEFAULT_NODE_CAP)).is_err());
    }

    #[test]
    fn landscape_relation_is_symmetric() {
        let g = load_edge_list("1 2\n2 3\n3 4\n4 1\n1 3\n4 5", false).unwrap().graph;
        let l = Landscape::build(&g, None).unwrap();
        for (p, place) in l.places.iter().enumerate() {
            for &q in &place.up {
                assert!(l.places[q].down.contains(&p));
                assert_eq!(l.places[q].nodes.len(), place.nodes.len() + 1);
            }
            for &q in &place.down {
                assert!(l.places[q].up.contains(&p));
            }
        }
    }

    #[test]
    fn certificate_on_karate() {
        let g = karate();
        let c1 = g.all_nodes().difference(&set(&g, &["5", "6", "7", "11", "17"]));
        assert!(verify_local_minimum(&g, &c1).unwrap());
        let mut grown = c1.clone();
        grown.insert(g.node("5").unwrap());
        assert!(!verify_local_minimum(&g, &grown).unwrap());
        assert!(verify_local_minimum(&g, &g.all_nodes()).unwrap());
        assert_eq!(verify_local_minimum(&g, &set(&g, &["1"])), Err(Error::ZeroInternalDegree));
    }

    #[test]
    fn jaccard_cases() {
        let u = 10;
        let a = NodeSet::from_ids(u, [1, 2, 3]);
        let b = NodeSet::from_ids(u, [2, 3, 4]);
        assert_eq!(jaccard_distance(&a, &b).unwrap(), 0.5);
        assert_eq!(jaccard_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(jaccard_distance(&a, &NodeSet::from_ids(u, [7])).unwrap(), 1.0);
        assert_eq!(jaccard_distance(&NodeSet::new(u), &NodeSet::new(u)), Err(Error::EmptyUnion));
    }

    #[test]
    fn stability_needs_a_lower_community() {
        let g = karate();
        let c7 = Community::from_nodes(&g, set(&g, &["1", "12"])).unwrap();
        let c6 = Community::from_nodes(&g, set(&g, &["3", "10", "34"])).unwrap();
        assert_eq!(stability(&c7, std::slice::from_ref(&c7)), Err(Error::NoLowerCommunity));
        assert_eq!(stability(&c6, &[c6.clone(), c7.clone()]), Err(Error::NoLowerCommunity));
        assert_eq!(stability(&c7, &[c6.clone(), c7.clone()]).unwrap(), 1.0);
    }
}

#![allow(dead_code)]

use nodecut::{Graph, NodeSet};
use rand::seq::IteratorRandom;
use rand::Rng;

/// Connected graph on `n` nodes: a random spanning tree plus `extra` random
/// links (duplicates dropped).
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Graph {
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Graph::from_pairs(n, &pairs).expect("valid pairs")
}

/// Connected node set of `size` nodes (or the whole component if smaller)
/// grown from a random node through random frontier additions.
pub fn random_connected_subgraph<R: Rng>(rng: &mut R, g: &Graph, size: usize) -> NodeSet {
    let n = g.node_count();
    let start = rng.gen_range(0..n);
    let mut c = NodeSet::from_ids(n, [start]);
    while c.len() < size {
        let frontier = g.neighbors_of_set(&c);
        match frontier.iter().choose(rng) {
            Some(v) => {
                c.insert(v);
            }
            None => break,
        }
    }
    c
}

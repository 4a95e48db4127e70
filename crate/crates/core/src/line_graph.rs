//! Incidence matrix, the inverse-degree weighted line graph and the
//! ordinary normalised cut Φ on it.
//!
//! Line-graph weights are E_kl = Σ_i B_ik B_il / k_i, diagonal included.
//! With these weights Φ(L(C)) equals Ψ(C) for every connected C, which
//! [`check_equivalence`] evaluates numerically.

use crate::error::{Error, Result};
use crate::graph::{Graph, LinkId, LinkSet, NodeId, NodeSet};
use crate::psi;

fn require_unweighted(g: &Graph) -> Result<()> {
    if g.is_weighted() {
        Err(Error::WeightedUnsupported)
    } else {
        Ok(())
    }
}

/// Binary n×m node-link incidence, stored column-wise as endpoint pairs.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    n: usize,
    columns: Vec<[NodeId; 2]>,
    rows: Vec<Vec<LinkId>>,
}

impl IncidenceMatrix {
    pub fn new(g: &Graph) -> Self {
        let columns: Vec<[NodeId; 2]> = g.links().iter().map(|l| [l.source, l.target]).collect();
        let mut rows = vec![Vec::new(); g.node_count()];
        for (k, col) in columns.iter().enumerate() {
            rows[col[0]].push(k);
            rows[col[1]].push(k);
        }
        Self { n: g.node_count(), columns, rows }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn link_count(&self) -> usize {
        self.columns.len()
    }

    /// B_ik.
    pub fn get(&self, node: NodeId, link: LinkId) -> u8 {
        u8::from(self.columns[link].contains(&node))
    }

    /// Non-zero rows of column `link`.
    pub fn column(&self, link: LinkId) -> [NodeId; 2] {
        self.columns[link]
    }

    /// Non-zero columns of row `node`.
    pub fn row(&self, node: NodeId) -> &[LinkId] {
        &self.rows[node]
    }
}

/// Sparse symmetric m×m matrix stored as sorted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseSymmetric {
    fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_by_key(|e| (e.0, e.1));
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for (r, c, v) in entries {
            match rows[r].last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => rows[r].push((c, v)),
            }
        }
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, r: usize) -> &[(usize, f64)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.rows[r].binary_search_by_key(&c, |e| e.0).map(|pos| self.rows[r][pos].1).unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim().max(other.dim()) {
            let (a, b) = (self.rows.get(r), other.rows.get(r));
            for &(c, v) in a.into_iter().flatten() {
                worst = worst.max((v - other.get(r, c)).abs());
            }
            for &(c, v) in b.into_iter().flatten() {
                worst = worst.max((v - self.get(r, c)).abs());
            }
        }
        worst
    }
}

/// The weighted line graph. Vertices are the links of the original graph.
#[derive(Debug, Clone)]
pub struct LineGraph {
    adjacency: SparseSymmetric,
    degrees: Vec<f64>,
}

impl LineGraph {
    pub fn link_count(&self) -> usize {
        self.adjacency.dim()
    }

    /// E_kl.
    pub fn weight(&self, k: LinkId, l: LinkId) -> f64 {
        self.adjacency.get(k, l)
    }

    pub fn adjacency(&self) -> &SparseSymmetric {
        &self.adjacency
    }

    /// Σ_l E_kl, diagonal included.
    pub fn link_degree(&self, k: LinkId) -> f64 {
        self.degrees[k]
    }

    /// Upper-triangle entries (k ≤ l) as `(k, l, E_kl)`.
    pub fn entries(&self) -> impl Iterator<Item = (LinkId, LinkId, f64)> + '_ {
        (0..self.link_count())
            .flat_map(move |k| self.adjacency.row(k).iter().filter(move |e| e.0 >= k).map(move |&(l, w)| (k, l, w)))
    }

    /// Φ(L) = K^out / (K^in + K^out), both sums over all (k, l) pairs.
    pub fn phi(&self, l: &LinkSet) -> Result<f64> {
        let (k_in, k_out) = self.cut_sums(l);
        let total = k_in + k_out;
        if total <= 0.0 {
            return Err(Error::EmptyCut);
        }
        Ok(k_out / total)
    }

    /// (K^in(L), K^out(L)).
    pub fn cut_sums(&self, l: &LinkSet) -> (f64, f64) {
        let membership = MembershipVector::from_link_set(l, self.link_count());
        let mut k_in = 0.0;
        let mut k_out = 0.0;
        for k in l.iter() {
            for &(other, w) in self.adjacency.row(k) {
                if membership.get(other) {
                    k_in += w;
                } else {
                    k_out += w;
                }
            }
        }
        (k_in, k_out)
    }
}

/// μ_k(L) for every link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVector(Vec<bool>);

impl MembershipVector {
    pub fn from_link_set(l: &LinkSet, m: usize) -> Self {
        Self((0..m).map(|k| l.contains(k)).collect())
    }

    pub fn get(&self, k: LinkId) -> bool {
        self.0[k]
    }

    pub fn to_link_set(&self) -> LinkSet {
        LinkSet::from_ids(self.0.len(), self.0.iter().enumerate().filter(|e| *e.1).map(|e| e.0))
    }
}

/// Builds E from the incidence rows: every pair of links incident to node i
/// (a link paired with itself included) receives 1/k_i.
pub fn build_line_graph(g: &Graph) -> Result<LineGraph> {
    require_unweighted(g)?;
    let b = IncidenceMatrix::new(g);
    let mut triplets = Vec::new();
    for i in 0..g.node_count() {
        let inv = 1.0 / g.degree(i);
        for &k in b.row(i) {
            for &l in b.row(i) {
                triplets.push((k, l, inv));
            }
        }
    }
    let adjacency = SparseSymmetric::from_triplets(g.link_count(), triplets);
    let degrees = (0..g.link_count()).map(|k| adjacency.row(k).iter().map(|e| e.1).sum()).collect();
    Ok(LineGraph { adjacency, degrees })
}

/// D_ik = B_ik / √k_i, stored row-wise.
#[derive(Debug, Clone)]
pub struct Affiliation {
    m: usize,
    rows: Vec<Vec<(LinkId, f64)>>,
}

impl Affiliation {
    pub fn row(&self, node: NodeId) -> &[(LinkId, f64)] {
        &self.rows[node]
    }

    pub fn row_norms(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt()).collect()
    }

    /// DᵀD as an m×m matrix.
    pub fn gram(&self) -> SparseSymmetric {
        let mut triplets = Vec::new();
        for row in &self.rows {
            for &(k, a) in row {
                for &(l, b) in row {
                    triplets.push((k, l, a * b));
                }
            }
        }
        SparseSymmetric::from_triplets(self.m, triplets)
    }

    /// Off-diagonal entries of DDᵀ as `(i, j, w)` with i < j.
    pub fn node_projection(&self) -> Vec<(NodeId, NodeId, f64)> {
        let mut by_link: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); self.m];
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, v) in row {
                by_link[k].push((i, v));
            }
        }
        let mut triplets = Vec::new();
        for col in &by_link {
            for &(i, a) in col {
                for &(j, b) in col {
                    if i < j {
                        triplets.push((i, j, a * b));
                    }
                }
            }
        }
        let n = self.rows.len();
        let merged = SparseSymmetric::from_triplets(n, triplets);
        (0..n).flat_map(|i| merged.row(i).iter().map(move |&(j, w)| (i, j, w)).collect::<Vec<_>>()).collect()
    }
}

pub fn normalized_affiliation(g: &Graph) -> Result<Affiliation> {
    require_unweighted(g)?;
    let b = IncidenceMatrix::new(g);
    let rows = (0..g.node_count())
        .map(|i| {
            let scale = 1.0 / g.degree(i).sqrt();
            b.row(i).iter().map(|&k| (k, f64::from(b.get(i, k)) * scale)).collect()
        })
        .collect();
    Ok(Affiliation { m: g.link_count(), rows })
}

/// The original graph reweighted by the projection DDᵀ: each link (i, j)
/// gets 1/√(k_i k_j).
pub fn back_projection(g: &Graph) -> Result<Vec<(NodeId, NodeId, f64)>> {
    Ok(normalized_affiliation(g)?.node_projection())
}

/// |Φ(L(C)) − Ψ(C)| using a freshly built line graph.
pub fn check_equivalence(g: &Graph, c: &NodeSet) -> Result<f64> {
    let lg = build_line_graph(g)?;
    check_equivalence_with(g, &lg, c)
}

/// As [`check_equivalence`], reusing a line graph built from `g`.
pub fn check_equivalence_with(g: &Graph, lg: &LineGraph, c: &NodeSet) -> Result<f64> {
    require_unweighted(g)?;
    let psi = psi::psi(g, c)?;
    let phi = lg.phi(&g.induced_links(c))?;
    Ok((phi - psi).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::karate;
    use crate::graph::load_edge_list;

    fn path3() -> Graph {
        load_edge_list("1 2\n2 3", false).unwrap().graph
    }

    #[test]
    fn incidence_columns_have_two_entries() {
        let g = karate();
        let b = IncidenceMatrix::new(&g);
        for k in 0..g.link_count() {
            let ones: u32 = (0..g.node_count()).map(|i| u32::from(b.get(i, k))).sum();
            assert_eq!(ones, 2);
        }
    }

    #[test]
    fn path_line_graph_by_hand() {
        let g = path3();
        let lg = build_line_graph(&g).unwrap();
        assert_eq!(lg.weight(0, 1), 0.5);
        assert_eq!(lg.weight(1, 0), 0.5);
        assert_eq!(lg.weight(0, 0), 1.5);
        assert_eq!(lg.weight(1, 1), 1.5);
    }

    #[test]
    fn single_link_line_graph() {
        let g = load_edge_list("a b", false).unwrap().graph;
        let lg = build_line_graph(&g).unwrap();
        assert_eq!(lg.link_count(), 1);
        assert_eq!(lg.weight(0, 0), 2.0);
    }

    #[test]
    fn karate_line_graph_support() {
        let g = karate();
        let lg = build_line_graph(&g).unwrap();
        assert_eq!(lg.link_count(), 78);
        for k in 0..78 {
            let a = g.link(k);
            for l in 0..78 {
                let b = g.link(l);
                let share = k == l
                    || a.source == b.source
                    || a.source == b.target
                    || a.target == b.source
                    || a.target == b.target;
                assert_eq!(lg.weight(k, l) > 0.0, share, "links {k} {l}");
            }
            let diag = 1.0 / g.degree(a.source) + 1.0 / g.degree(a.target);
            assert!((lg.weight(k, k) - diag).abs() < 1e-15);
            assert!((lg.link_degree(k) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn affiliation_is_row_normalised_and_factorises_e() {
        for g in [path3(), karate()] {
            let d = normalized_affiliation(&g).unwrap();
            for norm in d.row_norms() {
                assert!((norm - 1.0).abs() < 1e-12);
            }
            let lg = build_line_graph(&g).unwrap();
            assert!(d.gram().max_abs_diff(lg.adjacency()) < 1e-12);
        }
    }

    #[test]
    fn back_projection_weights() {
        let g = path3();
        let w = back_projection(&g).unwrap();
        let (one, two) = (g.node("1").unwrap(), g.node("2").unwrap());
        let e = w.iter().find(|e| (e.0, e.1) == (one.min(two), one.max(two))).unwrap();
        assert!((e.2 - 1.0 / 2f64.sqrt()).abs() < 1e-15);

        let single = load_edge_list("a b", false).unwrap().graph;
        assert_eq!(back_projection(&single).unwrap(), vec![(0, 1, 1.0)]);

        let k = karate();
        let (a, b) = (k.node("1").unwrap(), k.node("12").unwrap());
        let w = back_projection(&k).unwrap();
        assert_eq!(w.len(), 78);
        let e = w.iter().find(|e| (e.0, e.1) == (a.min(b), a.max(b))).unwrap();
        assert!((e.2 - 0.25).abs() < 1e-15);
        for &(i, j, x) in &w {
            assert!((x - 1.0 / (k.degree(i) * k.degree(j)).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn phi_cases() {
        let g = path3();
        let lg = build_line_graph(&g).unwrap();
        let a = LinkSet::from_ids(2, [0]);
        assert_eq!(lg.cut_sums(&a), (1.5, 0.5));
        assert_eq!(lg.phi(&a).unwrap(), 0.25);
        assert_eq!(lg.phi(&LinkSet::full(2)).unwrap(), 0.0);
        assert_eq!(lg.phi(&LinkSet::new(2)), Err(Error::EmptyCut));

        let k = karate();
        let lg = build_line_graph(&k).unwrap();
        let l = LinkSet::from_ids(78, [k.link_by_labels("1", "12").unwrap()]);
        assert!((lg.phi(&l).unwrap() - 15.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn membership_roundtrip() {
        let l = LinkSet::from_ids(5, [1, 3]);
        let mu = MembershipVector::from_link_set(&l, 5);
        assert!(mu.get(1) && !mu.get(2));
        assert_eq!(mu.to_link_set(), l);
    }

    #[test]
    fn weighted_graphs_are_refused() {
        let g = load_edge_list("a b 2\nb c 1", true).unwrap().graph;
        assert_eq!(build_line_graph(&g).unwrap_err(), Error::WeightedUnsupported);
        assert_eq!(normalized_affiliation(&g).unwrap_err(), Error::WeightedUnsupported);
        assert_eq!(back_projection(&g).unwrap_err(), Error::WeightedUnsupported);
        assert_eq!(check_equivalence(&g, &g.all_nodes()).unwrap_err(), Error::WeightedUnsupported);
    }

    #[test]
    fn in_plus_out_equals_internal_degree() {
        let g = karate();
        let lg = build_line_graph(&g).unwrap();
        let c = g.nodes_from_labels(&["1", "2", "3", "4", "8", "14"]).unwrap();
        let (k_in, k_out) = lg.cut_sums(&g.induced_links(&c));
        let (_, internal) = psi::sigma_and_internal_degree(&g, &c);
        assert!((k_in + k_out - internal).abs() < 1e-12);
        assert!(check_equivalence_with(&g, &lg, &c).unwrap() < 1e-10);
    }
}

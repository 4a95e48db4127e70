//! JSON run reports.
//!
//! Reports are written with sorted keys and Ψ rounded to 12 significant
//! digits, so deterministic runs produce byte-identical files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::community::Community;
use crate::error::Result;
use crate::graph::{natural_label_cmp, Graph, LinkId, LinkSet};
use crate::greedy::{Exploration, TieBreakMode, TieBreakPolicy};

pub const FORMAT_VERSION: u32 = 1;

/// Rounds to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInfo {
    /// `dataset:<name>` or the input path.
    pub source: String,
    pub nodes: usize,
    pub links: usize,
    pub connected: bool,
    pub weighted: bool,
}

impl GraphInfo {
    pub fn new(g: &Graph, source: &str) -> Self {
        Self {
            source: source.to_string(),
            nodes: g.node_count(),
            links: g.link_count(),
            connected: g.is_connected_graph(),
            weighted: g.is_weighted(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyInfo {
    /// `det` or `rng`.
    pub mode: String,
    pub rng_seed: Option<u64>,
}

impl From<TieBreakPolicy> for PolicyInfo {
    fn from(p: TieBreakPolicy) -> Self {
        match p.mode {
            TieBreakMode::Deterministic => Self { mode: "det".into(), rng_seed: None },
            TieBreakMode::Random => Self { mode: "rng".into(), rng_seed: Some(p.rng_seed) },
        }
    }
}

pub type LinkLabels = [String; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityRecord {
    pub name: String,
    pub nodes: Vec<String>,
    pub links: Vec<LinkLabels>,
    pub node_count: usize,
    pub link_count: usize,
    pub psi: f64,
    pub boundary: Vec<String>,
    pub seed_count: usize,
    pub seeds: Vec<LinkLabels>,
    pub stability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub psi: f64,
    pub node_count: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub seed: LinkLabels,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub graph: GraphInfo,
    pub policy: PolicyInfo,
    pub seeds_run: usize,
    pub communities: Vec<CommunityRecord>,
    pub ground_state: GroundState,
    /// Number of seed runs keyed by how many minima they recorded.
    pub minima_histogram: BTreeMap<String, usize>,
    pub failures: Vec<FailureRecord>,
    /// Trajectory CSV file names, one per seed, when written.
    #[serde(default)]
    pub trajectories: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

fn link_labels(g: &Graph, id: LinkId) -> LinkLabels {
    let (a, b) = g.link_labels(id);
    [a, b]
}

fn sorted_link_labels(g: &Graph, links: &LinkSet) -> Vec<LinkLabels> {
    let mut out: Vec<LinkLabels> = links.iter().map(|k| link_labels(g, k)).collect();
    out.sort_by(|x, y| natural_label_cmp(&x[0], &y[0]).then_with(|| natural_label_cmp(&x[1], &y[1])));
    out
}

pub fn community_record(g: &Graph, name: &str, c: &Community) -> CommunityRecord {
    let mut seeds: Vec<LinkLabels> = c.seeds.iter().map(|&k| link_labels(g, k)).collect();
    seeds.sort_by(|x, y| natural_label_cmp(&x[0], &y[0]).then_with(|| natural_label_cmp(&x[1], &y[1])));
    CommunityRecord {
        name: name.to_string(),
        nodes: g.sorted_labels(&c.nodes),
        links: sorted_link_labels(g, &c.links),
        node_count: c.nodes.len(),
        link_count: c.links.len(),
        psi: round_sig12(c.psi),
        boundary: g.sorted_labels(&c.boundary),
        seed_count: c.seed_count,
        seeds,
        stability: c.stability.map(round_sig12),
    }
}

impl RunReport {
    /// Builds a report; communities are named `C1..Ck` in Ψ order. With
    /// `include_ground_state` the whole graph is appended as `C0`.
    pub fn from_exploration(
        g: &Graph,
        source: &str,
        exploration: &Exploration,
        policy: TieBreakPolicy,
        include_ground_state: bool,
    ) -> Result<Self> {
        let mut communities: Vec<CommunityRecord> = exploration
            .communities
            .iter()
            .enumerate()
            .map(|(i, c)| community_record(g, &format!("C{}", i + 1), c))
            .collect();
        if include_ground_state && exploration.connected {
            let mut whole = Community::from_nodes(g, g.all_nodes())?;
            whole.seed_count = exploration.runs.iter().filter(|r| r.result.is_ok()).count();
            communities.push(community_record(g, "C0", &whole));
        }
        let minima_histogram = exploration.minima_histogram().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let failures = exploration
            .failures()
            .map(|(seed, e)| FailureRecord { seed: link_labels(g, seed), error: e.to_string() })
            .collect();
        let note = if exploration.connected {
            "whole connected graph, psi = 0; excluded from communities".to_string()
        } else {
            "graph is disconnected; every run was confined to its seed's component, whose psi = 0".to_string()
        };
        Ok(Self {
            format_version: FORMAT_VERSION,
            graph: GraphInfo::new(g, source),
            policy: policy.into(),
            seeds_run: exploration.runs.len(),
            communities,
            ground_state: GroundState { psi: 0.0, node_count: g.node_count(), note },
            minima_histogram,
            failures,
            trajectories: Vec::new(),
            timing_ms: None,
        })
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serialises");
        let mut out = serde_json::to_string_pretty(&value).expect("value serialises");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Rebuilds communities against `g`, recomputing L(C), Ψ and boundary
    /// from the listed nodes. `C0` entries are skipped. Returns names
    /// alongside.
    pub fn communities_in(&self, g: &Graph) -> Result<(Vec<Community>, Vec<String>)> {
        let mut out = Vec::new();
        let mut names = Vec::new();
        for rec in self.communities.iter().filter(|r| r.name != "C0") {
            let nodes = g.nodes_from_labels(&rec.nodes)?;
            let mut c = Community::from_nodes(g, nodes)?;
            c.seed_count = rec.seed_count;
            c.stability = rec.stability;
            c.seeds = rec.seeds.iter().map(|[u, v]| g.link_by_labels(u, v)).collect::<Result<Vec<_>>>()?;
            out.push(c);
            names.push(rec.name.clone());
        }
        Ok((out, names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::karate;
    use crate::greedy::{run_all_seeds, ExploreOptions};

    #[test]
    fn rounding() {
        assert_eq!(round_sig12(15.0 / 32.0), 0.46875);
        assert_eq!(round_sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig12(0.0), 0.0);
    }

    #[test]
    fn karate_report_roundtrips() {
        let g = karate();
        let ex = run_all_seeds(&g, &ExploreOptions::default()).unwrap();
        let report =
            RunReport::from_exploration(&g, "dataset:karate", &ex, TieBreakPolicy::deterministic(), false).unwrap();
        let json = report.to_json();
        let back = RunReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), json);
        let (communities, names) = back.communities_in(&g).unwrap();
        assert_eq!(names.len(), 7);
        for (c, orig) in communities.iter().zip(&ex.communities) {
            assert_eq!(c.nodes, orig.nodes);
            assert_eq!(c.seeds, orig.seeds);
        }
        // keys are sorted
        let boundary = json.find("\"boundary\"").unwrap();
        let name = json.find("\"name\"").unwrap();
        assert!(boundary < name);
    }

    #[test]
    fn ground_state_entry() {
        let g = karate();
        let ex = run_all_seeds(&g, &ExploreOptions::default()).unwrap();
        let report =
            RunReport::from_exploration(&g, "dataset:karate", &ex, TieBreakPolicy::deterministic(), true).unwrap();
        let last = report.communities.last().unwrap();
        assert_eq!((last.name.as_str(), last.node_count, last.psi), ("C0", 34, 0.0));
        let (communities, _) = report.communities_in(&g).unwrap();
        assert_eq!(communities.len(), 7);
    }
}

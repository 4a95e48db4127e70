//! Greedy exploration of the Ψ-landscape from seed links.
//!
//! A run starts from the two endpoints of a seed link and repeats:
//!
//! 1. **descent**: add the frontier node with the largest Ψ reduction while
//!    some addition reduces Ψ;
//! 2. **pruning**: when no addition helps, remove the member whose exclusion
//!    reduces Ψ most (keeping the subgraph connected with k_in > 0), then go
//!    back to descent;
//! 3. **record**: when neither move helps, the subgraph is a local minimum;
//! 4. **escape**: add the frontier node with the smallest Ψ increase, and keep
//!    climbing that way until some addition reduces Ψ again.
//!
//! The run ends when the subgraph spans its connected component (Ψ = 0).
//!
//! Ψ differences within [`PSI_TOLERANCE`] are ties. Deterministic tie-breaking
//! picks the smallest node label in natural order; random tie-breaking draws
//! uniformly among tied candidates from a generator seeded per seed link, so
//! results never depend on scheduling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::community::{sort_communities, Community};
use crate::error::{Error, Result};
use crate::graph::{Graph, LinkId, NodeId, NodeSet};
use crate::oracle;
use crate::psi::{self, SubgraphState};

/// Absolute tolerance for comparing Ψ values.
pub const PSI_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreakMode {
    Deterministic,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TieBreakPolicy {
    pub mode: TieBreakMode,
    /// Only used in random mode.
    pub rng_seed: u64,
}

impl TieBreakPolicy {
    pub fn deterministic() -> Self {
        Self { mode: TieBreakMode::Deterministic, rng_seed: 0 }
    }

    pub fn random(rng_seed: u64) -> Self {
        Self { mode: TieBreakMode::Random, rng_seed }
    }

    /// Tie-breaker for the run seeded at `seed`.
    pub fn tie_breaker(&self, seed: LinkId) -> TieBreaker {
        let rng = match self.mode {
            TieBreakMode::Deterministic => None,
            TieBreakMode::Random => {
                let mix = (seed as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                Some(ChaCha8Rng::seed_from_u64(self.rng_seed ^ mix))
            }
        };
        TieBreaker { rng }
    }
}

impl Default for TieBreakPolicy {
    fn default() -> Self {
        Self::deterministic()
    }
}

/// Orders candidate moves by ΔΨ, resolving ties per policy.
#[derive(Debug, Clone)]
pub struct TieBreaker {
    rng: Option<ChaCha8Rng>,
}

impl TieBreaker {
    pub fn deterministic() -> Self {
        Self { rng: None }
    }

    /// Sorts `(node, ΔΨ)` candidates ascending by ΔΨ. Candidates within
    /// [`PSI_TOLERANCE`] of the first member of their group are tied.
    pub fn rank(&mut self, g: &Graph, mut candidates: Vec<(NodeId, f64)>) -> Vec<(NodeId, f64)> {
        candidates.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| g.label_rank(a.0).cmp(&g.label_rank(b.0))));
        let mut start = 0;
        while start < candidates.len() {
            let head = candidates[start].1;
            let mut end = start + 1;
            while end < candidates.len() && candidates[end].1 - head <= PSI_TOLERANCE {
                end += 1;
            }
            let group = &mut candidates[start..end];
            match self.rng.as_mut() {
                Some(rng) if group.len() > 1 => {
                    group.sort_by_key(|c| g.label_rank(c.0));
                    group.shuffle(rng);
                }
                _ => group.sort_by_key(|c| g.label_rank(c.0)),
            }
            start = end;
        }
        candidates
    }
}

/// All frontier additions as `(node, ΔΨ)`, best first.
pub fn ranked_additions(s: &SubgraphState<'_>, tb: &mut TieBreaker) -> Vec<(NodeId, f64)> {
    let current = s.psi();
    let candidates = s.frontier().iter().map(|i| (i, s.psi_after_add(i).expect("frontier node") - current)).collect();
    tb.rank(s.graph(), candidates)
}

/// The frontier node minimising Ψ(C ∪ i), with its ΔΨ.
pub fn best_addition(s: &SubgraphState<'_>, tb: &mut TieBreaker) -> Result<(NodeId, f64)> {
    ranked_additions(s, tb).into_iter().next().ok_or(Error::NoFrontier)
}

/// Members whose removal keeps the subgraph connected with k_in > 0, as
/// `(node, ΔΨ)`, best first.
pub fn ranked_removals(s: &SubgraphState<'_>, tb: &mut TieBreaker) -> Vec<(NodeId, f64)> {
    let g = s.graph();
    let cut = g.articulation_points(s.members());
    let current = s.psi();
    let candidates = s
        .members()
        .iter()
        .filter(|&i| !cut.contains(i))
        .filter_map(|i| s.psi_after_remove(i).ok().map(|p| (i, p - current)))
        .collect();
    tb.rank(g, candidates)
}

/// Repeatedly removes the member whose exclusion lowers Ψ the most. Returns
/// the removed nodes in order.
pub fn prune(s: &mut SubgraphState<'_>, tb: &mut TieBreaker) -> Vec<NodeId> {
    let mut removed = Vec::new();
    while let Some((node, delta)) = ranked_removals(s, tb).into_iter().next() {
        if delta >= -PSI_TOLERANCE {
            break;
        }
        s.apply_remove(node).expect("ranked removal is valid");
        removed.push(node);
    }
    removed
}

/// Adds the frontier node with the smallest Ψ increase.
pub fn escape_step(s: &mut SubgraphState<'_>, tb: &mut TieBreaker) -> Result<NodeId> {
    let (node, _) = best_addition(s, tb)?;
    s.apply_add(node)?;
    Ok(node)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// Initial state: the seed link's endpoints.
    Seed,
    Add,
    Remove,
    RecordMinimum,
}

impl Action {
    pub fn as_str(&self) -> &'static str {
        match self {
            Action::Seed => "seed",
            Action::Add => "add",
            Action::Remove => "remove",
            Action::RecordMinimum => "record-minimum",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub step: usize,
    pub action: Action,
    /// The node moved; `None` for seed and record rows.
    pub node: Option<NodeId>,
    /// Ψ after the step (cached value).
    pub psi: f64,
    pub size: usize,
}

/// A local minimum met during one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordedMinimum {
    pub nodes: NodeSet,
    /// Ψ recomputed from scratch.
    pub psi: f64,
    /// Ψ carried incrementally up to this point.
    pub cached_psi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub seed: LinkId,
    pub steps: Vec<Step>,
    pub minima: Vec<RecordedMinimum>,
    /// True when the graph is disconnected and the run stayed inside the
    /// seed's component.
    pub confined: bool,
}

impl Trajectory {
    /// CSV with columns step, action, node, psi, size.
    pub fn to_csv(&self, g: &Graph) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["step", "action", "node", "psi", "size"]).expect("in-memory write");
        for s in &self.steps {
            let node = s.node.map(|v| g.label(v).to_string()).unwrap_or_default();
            w.write_record([
                s.step.to_string(),
                s.action.to_string(),
                node,
                format!("{:.12e}", s.psi),
                s.size.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

struct SeedRun<'g> {
    state: SubgraphState<'g>,
    tb: TieBreaker,
    steps: Vec<Step>,
    minima: Vec<RecordedMinimum>,
}

impl<'g> SeedRun<'g> {
    fn log(&mut self, action: Action, node: Option<NodeId>) {
        self.steps.push(Step { step: self.steps.len(), action, node, psi: self.state.psi(), size: self.state.len() });
    }

    fn add(&mut self, node: NodeId) {
        self.state.apply_add(node).expect("frontier node");
        if self.state.frontier().is_empty() {
            // ground state: report Ψ = 0 without accumulated drift
            self.state.recompute();
        }
        self.log(Action::Add, Some(node));
    }

    /// Descent and pruning until neither move lowers Ψ.
    fn settle(&mut self) {
        loop {
            if let Some(&(node, delta)) = ranked_additions(&self.state, &mut self.tb).first() {
                if delta < -PSI_TOLERANCE {
                    self.add(node);
                    continue;
                }
            }
            match ranked_removals(&self.state, &mut self.tb).first() {
                Some(&(node, delta)) if delta < -PSI_TOLERANCE => {
                    self.state.apply_remove(node).expect("ranked removal is valid");
                    self.log(Action::Remove, Some(node));
                }
                _ => break,
            }
        }
    }

    fn record(&mut self) {
        let cached_psi = self.state.psi();
        self.state.recompute();
        let psi = psi::psi(self.state.graph(), self.state.members()).expect("seeded state has k_in > 0");
        self.minima.push(RecordedMinimum { nodes: self.state.members().clone(), psi, cached_psi });
        self.log(Action::RecordMinimum, None);
    }
}

/// Runs the greedy search from `seed`, confined to the seed's component.
pub fn explore_seed(g: &Graph, seed: LinkId, policy: TieBreakPolicy) -> Result<Trajectory> {
    let link = *g.link(seed);
    let component = g.component_of(link.source);
    let target = component.len();
    let start = NodeSet::from_ids(g.node_count(), [link.source, link.target]);
    let mut run = SeedRun {
        state: SubgraphState::new(g, &start)?,
        tb: policy.tie_breaker(seed),
        steps: Vec::new(),
        minima: Vec::new(),
    };
    run.log(Action::Seed, None);

    // Settled states already seen, with the number of escapes tried from each.
    let mut escapes: HashMap<NodeSet, usize> = HashMap::new();
    let phase_cap = 10 * target.max(1);
    let mut phases = 0;
    loop {
        run.settle();
        if run.state.len() == target {
            break;
        }
        let key = run.state.members().clone();
        let tried = escapes.entry(key).or_insert(0);
        if *tried == 0 {
            run.record();
        }
        let rank = *tried;
        *tried += 1;
        let ranked = ranked_additions(&run.state, &mut run.tb);
        let Some(&(node, _)) = ranked.get(rank) else {
            return Err(Error::Oscillation(format!(
                "seed {:?}: all {} escape candidates of a {}-node minimum exhausted",
                g.link_labels(seed),
                ranked.len(),
                run.state.len()
            )));
        };
        run.add(node);
        // Keep climbing the gentlest slope until a descent opens up.
        while run.state.len() < target {
            let (node, delta) = best_addition(&run.state, &mut run.tb)?;
            if delta < -PSI_TOLERANCE {
                break;
            }
            run.add(node);
        }
        phases += 1;
        if phases > phase_cap {
            return Err(Error::Oscillation(format!(
                "seed {:?}: exceeded {phase_cap} escape phases",
                g.link_labels(seed)
            )));
        }
    }
    Ok(Trajectory { seed, steps: run.steps, minima: run.minima, confined: target < g.node_count() })
}

/// Runs the greedy search from `seed` on a connected graph.
pub fn run_from_seed(g: &Graph, seed: LinkId, policy: TieBreakPolicy) -> Result<Trajectory> {
    let components = g.components().len();
    if components != 1 {
        return Err(Error::DisconnectedGraph { components });
    }
    explore_seed(g, seed, policy)
}

#[derive(Debug, Clone, Default)]
pub struct ExploreOptions {
    pub policy: TieBreakPolicy,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    pub allow_disconnected: bool,
    /// Seed links to run; `None` runs every link.
    pub seeds: Option<Vec<LinkId>>,
}

#[derive(Debug, Clone)]
pub struct SeedOutcome {
    pub seed: LinkId,
    pub result: Result<Trajectory>,
}

#[derive(Debug, Clone)]
pub struct Exploration {
    /// Distinct minima, sorted by Ψ; components spanned entirely are excluded.
    pub communities: Vec<Community>,
    /// One entry per seed, in seed order.
    pub runs: Vec<SeedOutcome>,
    pub connected: bool,
}

impl Exploration {
    /// Number of successful runs by how many minima they recorded.
    pub fn minima_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for run in &self.runs {
            if let Ok(t) = &run.result {
                *hist.entry(t.minima.len()).or_insert(0) += 1;
            }
        }
        hist
    }

    pub fn failures(&self) -> impl Iterator<Item = (LinkId, &Error)> {
        self.runs.iter().filter_map(|r| r.result.as_ref().err().map(|e| (r.seed, e)))
    }

    pub fn trajectory(&self, seed: LinkId) -> Option<&Trajectory> {
        self.runs.iter().find(|r| r.seed == seed).and_then(|r| r.result.as_ref().ok())
    }
}

/// One greedy run per seed link, minima merged by node set.
pub fn run_all_seeds(g: &Graph, options: &ExploreOptions) -> Result<Exploration> {
    let components = g.components().len();
    let connected = components == 1;
    if !connected && !options.allow_disconnected {
        return Err(Error::DisconnectedGraph { components });
    }
    let seeds: Vec<LinkId> = options.seeds.clone().unwrap_or_else(|| (0..g.link_count()).collect());
    let policy = options.policy;
    let work = |seeds: &[LinkId]| -> Vec<SeedOutcome> {
        seeds.par_iter().map(|&seed| SeedOutcome { seed, result: explore_seed(g, seed, policy) }).collect()
    };
    let runs = if options.jobs == 0 {
        work(&seeds)
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(|| work(&seeds))
    };

    let mut merged: BTreeMap<Vec<NodeId>, (NodeSet, f64, Vec<LinkId>)> = BTreeMap::new();
    for run in &runs {
        let Ok(t) = &run.result else { continue };
        for m in &t.minima {
            let entry = merged.entry(m.nodes.to_vec()).or_insert_with(|| (m.nodes.clone(), m.psi, Vec::new()));
            entry.2.push(run.seed);
        }
    }
    let mut communities = Vec::with_capacity(merged.len());
    for (_, (nodes, _, mut found_by)) in merged {
        found_by.sort_unstable();
        let mut c = Community::from_nodes(g, nodes)?;
        c.seed_count = found_by.len();
        c.seeds = found_by;
        communities.push(c);
    }
    sort_communities(&mut communities);
    let stabilities: Vec<Option<f64>> = communities.iter().map(|c| oracle::stability(c, &communities).ok()).collect();
    for (c, s) in communities.iter_mut().zip(stabilities) {
        c.stability = s;
    }
    Ok(Exploration { communities, runs, connected })
}

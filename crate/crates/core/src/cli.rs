//! The `nodecut` command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure |
//! | 2 | malformed input: edge list, report JSON or arguments |
//! | 3 | disconnected graph without `--allow-disconnected` |
//! | 4 | graph too large for the exhaustive oracle without `--force` |
//! | 5 | local-minimum certificate failed (or greedy ⊄ exact in `oracle --compare`) |
//! | 6 | line-graph equivalence residual ≥ 1e-10 |
//! | 7 | weighted graph where the line-graph construction is required |
//! | 8 | one or more seed runs failed |
//!
//! Errors print one line on standard error:
//! `error: code=<n> kind=<kind> msg=<text>`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::datasets;
use crate::error::Error;
use crate::graph::{load_edge_list, Graph};
use crate::greedy::{run_all_seeds, ExploreOptions, TieBreakPolicy};
use crate::hierarchy::{build_polyhierarchy, classify_overlap, cover_check};
use crate::line_graph::{build_line_graph, check_equivalence_with};
use crate::oracle::{self, exact_local_minima, verify_local_minimum};
use crate::report::{community_record, round_sig12, GraphInfo, RunReport};

/// Equivalence residual threshold used by `verify`.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "nodecut", version, about = "Overlapping link communities via the normalised node cut")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy search from every seed link (or one) and a JSON report.
    Detect(DetectArgs),
    /// Exhaustive landscape minima for small graphs.
    Oracle(OracleArgs),
    /// Re-check a report's communities: minimum certificate and Φ = Ψ.
    Verify(VerifyArgs),
    /// Containment DAG (DOT) and pairwise overlap classes (JSON).
    Hierarchy(HierarchyArgs),
    /// Dump the weighted line graph.
    Linegraph(LinegraphArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge-list file (`u v` or `u v w` per line, `#` comments).
    pub input: Option<PathBuf>,
    /// Use an embedded dataset instead of a file.
    #[arg(long, value_name = "NAME")]
    pub dataset: Option<String>,
    /// Read the third column as link weight.
    #[arg(long)]
    pub weighted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    Det,
    Rng,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Run a single seed link, given as `u,v`.
    #[arg(long, value_name = "U,V", conflicts_with = "all_seeds")]
    pub seed: Option<String>,
    /// Run every link as a seed (default).
    #[arg(long)]
    pub all_seeds: bool,
    #[arg(long, value_enum, default_value = "det")]
    pub tie_break: TieBreakArg,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write one trajectory CSV per seed into this directory.
    #[arg(long, value_name = "DIR")]
    pub trajectories: Option<PathBuf>,
    /// List the whole graph as community `C0`.
    #[arg(long)]
    pub include_ground_state: bool,
    #[arg(long)]
    pub allow_disconnected: bool,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = oracle::DEFAULT_NODE_CAP)]
    pub max_nodes: usize,
    /// Enumerate regardless of size.
    #[arg(long)]
    pub force: bool,
    /// Compare against the communities of a detect report.
    #[arg(long, value_name = "FILE")]
    pub compare: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Report produced by `detect`.
    pub report: PathBuf,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Require the line-graph equivalence check (refused on weighted graphs).
    #[arg(long)]
    pub equivalence: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HierarchyArgs {
    /// Report produced by `detect`.
    pub report: PathBuf,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Write the DAG in DOT format here.
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Write the overlap JSON here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinegraphFormat {
    Edges,
    Dot,
}

#[derive(Debug, Args)]
pub struct LinegraphArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "edges")]
    pub format: LinegraphFormat,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self { code, kind, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(1, "io", format!("{}: {e}", path.display()))
    }

    pub fn line(&self) -> String {
        let msg = self.message.replace(['\n', '\r'], " ");
        format!("error: code={} kind={} msg={}", self.code, self.kind, msg)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse { .. }
            | Error::SelfLoop { .. }
            | Error::NonPositiveWeight { .. }
            | Error::UnknownLabel(_)
            | Error::UnknownLink(..) => (2, "parse"),
            Error::DisconnectedGraph { .. } => (3, "disconnected"),
            Error::TooLarge { .. } => (4, "too-large"),
            Error::WeightedUnsupported => (7, "weighted-unsupported"),
            Error::ZeroInternalDegree | Error::NotANeighbor(_) | Error::NotAMember(_) => (2, "parse"),
            _ => (8, "run-failure"),
        };
        Self::new(code, kind, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct LoadedInput {
    graph: Graph,
    source: String,
}

fn load_graph(args: &GraphArgs, fallback_source: Option<&str>) -> CliResult<LoadedInput> {
    if let Some(name) = &args.dataset {
        return dataset(name);
    }
    if let Some(path) = &args.input {
        return load_path(path, args.weighted);
    }
    match fallback_source {
        Some(src) => match src.strip_prefix("dataset:") {
            Some(name) => dataset(name),
            None => load_path(Path::new(src), args.weighted),
        },
        None => Err(CliError::new(2, "usage", "no input: give an edge-list path or --dataset")),
    }
}

fn dataset(name: &str) -> CliResult<LoadedInput> {
    let graph =
        datasets::by_name(name).ok_or_else(|| CliError::new(2, "usage", format!("unknown dataset {name:?}")))?;
    Ok(LoadedInput { graph, source: format!("dataset:{name}") })
}

fn load_path(path: &Path, weighted: bool) -> CliResult<LoadedInput> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let loaded =
        load_edge_list(&text, weighted).map_err(|e| CliError::new(2, "parse", format!("{}: {e}", path.display())))?;
    Ok(LoadedInput { graph: loaded.graph, source: path.display().to_string() })
}

fn read_report(path: &Path) -> CliResult<RunReport> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    RunReport::from_json(&text).map_err(|e| CliError::new(2, "parse", format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value");
    s.push('\n');
    s
}

fn cmd_detect(args: &DetectArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let input = load_graph(&args.graph, None)?;
    let g = &input.graph;
    let policy = match args.tie_break {
        TieBreakArg::Det => TieBreakPolicy::deterministic(),
        TieBreakArg::Rng => TieBreakPolicy::random(args.rng_seed),
    };
    let seeds = match &args.seed {
        Some(spec) => {
            let (u, v) = spec
                .split_once(',')
                .ok_or_else(|| CliError::new(2, "usage", format!("--seed expects u,v, got {spec:?}")))?;
            Some(vec![g.link_by_labels(u.trim(), v.trim())?])
        }
        None => None,
    };
    let options = ExploreOptions { policy, jobs: args.jobs, allow_disconnected: args.allow_disconnected, seeds };
    let exploration = run_all_seeds(g, &options)?;
    let mut report = RunReport::from_exploration(g, &input.source, &exploration, policy, args.include_ground_state)?;

    if let Some(dir) = &args.trajectories {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for run in &exploration.runs {
            let Ok(t) = &run.result else { continue };
            let (u, v) = g.link_labels(run.seed);
            let name = format!("seed_{u}_{v}.csv");
            let path = dir.join(&name);
            fs::write(&path, t.to_csv(g)).map_err(|e| CliError::io(&path, e))?;
            report.trajectories.push(name);
        }
    }
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    log::info!("detect: {} seeds in {elapsed:.1} ms", report.seeds_run);
    if args.timing {
        report.timing_ms = Some(elapsed);
    }
    emit(args.out.as_deref(), &report.to_json(), stdout)?;
    if !report.failures.is_empty() {
        return Err(CliError::new(8, "run-failure", format!("{} seed runs failed", report.failures.len())));
    }
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let input = load_graph(&args.graph, None)?;
    let g = &input.graph;
    let cap = if args.force { None } else { Some(args.max_nodes) };
    let minima = exact_local_minima(g, cap)?;
    let records: Vec<_> =
        minima.iter().enumerate().map(|(i, c)| community_record(g, &format!("E{}", i + 1), c)).collect();
    let mut doc = json!({
        "graph": GraphInfo::new(g, &input.source),
        "minima": records,
    });
    let mut code = 0;
    if let Some(path) = &args.compare {
        let report = read_report(path)?;
        let (greedy, _) = report.communities_in(g)?;
        let exact_sets: Vec<Vec<String>> = records.iter().map(|r| r.nodes.clone()).collect();
        let greedy_sets: Vec<Vec<String>> = greedy.iter().map(|c| g.sorted_labels(&c.nodes)).collect();
        let greedy_only: Vec<_> = greedy_sets.iter().filter(|s| !exact_sets.contains(s)).cloned().collect();
        let exact_only: Vec<_> = exact_sets.iter().filter(|s| !greedy_sets.contains(s)).cloned().collect();
        let sound = greedy_only.is_empty();
        doc["compare"] = json!({
            "greedy_only": greedy_only,
            "exact_only": exact_only,
            "greedy_subset_of_exact": sound,
        });
        if !sound {
            code = 5;
        }
    }
    emit(args.out.as_deref(), &pretty(&doc), stdout)?;
    if code != 0 {
        return Err(CliError::new(code, "certificate", "greedy reported a community that is not an exact minimum"));
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let report = read_report(&args.report)?;
    let input = load_graph(&args.graph, Some(&report.graph.source))?;
    let g = &input.graph;
    if args.equivalence && g.is_weighted() {
        return Err(Error::WeightedUnsupported.into());
    }
    let line_graph = if g.is_weighted() { None } else { Some(build_line_graph(g)?) };

    let mut rows = Vec::new();
    let mut certificate_failed = false;
    let mut equivalence_failed = false;
    for rec in report.communities.iter().filter(|r| r.name != "C0") {
        let nodes = g.nodes_from_labels(&rec.nodes)?;
        let connected = g.is_connected(&nodes);
        let minimum = connected && verify_local_minimum(g, &nodes).unwrap_or(false);
        let residual = match &line_graph {
            Some(lg) if connected => check_equivalence_with(g, lg, &nodes).ok(),
            _ => None,
        };
        certificate_failed |= !minimum;
        if line_graph.is_some() {
            equivalence_failed |= !residual.is_some_and(|r| r < EQUIVALENCE_TOLERANCE);
        }
        rows.push(json!({
            "name": rec.name,
            "connected": connected,
            "local_minimum": minimum,
            "equivalence_residual": residual,
        }));
    }
    let ok = !certificate_failed && !equivalence_failed;
    let doc = json!({ "communities": rows, "ok": ok, "equivalence_checked": line_graph.is_some() });
    emit(args.out.as_deref(), &pretty(&doc), stdout)?;
    if certificate_failed {
        return Err(CliError::new(5, "certificate", "a community is not a local minimum"));
    }
    if equivalence_failed {
        return Err(CliError::new(6, "equivalence", "line-graph equivalence residual above tolerance"));
    }
    Ok(0)
}

fn cmd_hierarchy(args: &HierarchyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let report = read_report(&args.report)?;
    let input = load_graph(&args.graph, Some(&report.graph.source))?;
    let g = &input.graph;
    let (communities, names) = report.communities_in(g).map_err(|e| CliError::new(2, "parse", e.to_string()))?;
    let dag = build_polyhierarchy(g, &communities, &names);
    let mut pairs = Vec::new();
    for i in 0..communities.len() {
        for j in i + 1..communities.len() {
            let rel = classify_overlap(g, &communities[i], &communities[j]);
            let shared_links: Vec<[String; 2]> = rel
                .shared_links
                .iter()
                .map(|k| {
                    let (a, b) = g.link_labels(k);
                    [a, b]
                })
                .collect();
            pairs.push(json!({
                "a": names[i],
                "b": names[j],
                "kind": rel.kind.as_str(),
                "shared_nodes": g.sorted_labels(&rel.shared_nodes),
                "shared_links": shared_links,
                "covers_graph": cover_check(g, &communities[i], &communities[j]),
            }));
        }
    }
    let edges: Vec<[&str; 2]> =
        dag.edges.iter().map(|&(p, c)| [dag.names[p].as_str(), dag.names[c].as_str()]).collect();
    let dot = dag.to_dot();
    let mut doc = json!({ "pairs": pairs, "dag_edges": edges });
    match &args.dot {
        Some(path) => fs::write(path, &dot).map_err(|e| CliError::io(path, e))?,
        None => doc["dot"] = json!(dot),
    }
    emit(args.out.as_deref(), &pretty(&doc), stdout)?;
    Ok(0)
}

fn cmd_linegraph(args: &LinegraphArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let input = load_graph(&args.graph, None)?;
    let g = &input.graph;
    let lg = build_line_graph(g)?;
    let mut text = String::new();
    match args.format {
        LinegraphFormat::Edges => {
            text.push_str("# weighted line graph: link_k link_l weight (diagonal included)\n");
            for k in 0..g.link_count() {
                let (u, v) = g.link_labels(k);
                text.push_str(&format!("# link {k} = ({u}, {v})\n"));
            }
            for (k, l, w) in lg.entries() {
                text.push_str(&format!("{k} {l} {}\n", round_sig12(w)));
            }
        }
        LinegraphFormat::Dot => {
            text.push_str("graph line_graph {\n");
            for k in 0..g.link_count() {
                let (u, v) = g.link_labels(k);
                text.push_str(&format!("  {k} [label=\"({u}, {v})\"];\n"));
            }
            for (k, l, w) in lg.entries().filter(|e| e.0 != e.1) {
                text.push_str(&format!("  {k} -- {l} [weight={}];\n", round_sig12(w)));
            }
            text.push_str("}\n");
        }
    }
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(0)
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            let _ = writeln!(stderr, "{}", CliError::new(2, "usage", first).line());
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Detect(a) => cmd_detect(a, stdout),
        Command::Oracle(a) => cmd_oracle(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Hierarchy(a) => cmd_hierarchy(a, stdout),
        Command::Linegraph(a) => cmd_linegraph(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            e.code
        }
    }
}

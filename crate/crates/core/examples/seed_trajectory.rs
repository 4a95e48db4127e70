// The moves of a single seed run: descent, pruning, recorded minima and the
// escapes between them.
//
// `cargo run --example seed_trajectory -- 25 26`

use nodecut::greedy::Action;
use nodecut::{datasets, run_from_seed, TieBreakPolicy};

pub fn run(u: &str, v: &str) -> nodecut::Result<Vec<usize>> {
    let g = datasets::karate();
    let seed = g.link_by_labels(u, v)?;
    let t = run_from_seed(&g, seed, TieBreakPolicy::deterministic())?;
    for step in &t.steps {
        let node = step.node.map(|n| g.label(n).to_string()).unwrap_or_default();
        let mark = if step.action == Action::RecordMinimum { "  <--" } else { "" };
        println!("{:>3} {:<15} {:>3} psi={:.4} size={}{mark}", step.step, step.action, node, step.psi, step.size);
    }
    for m in &t.minima {
        println!("minimum: psi={:.3} {{{}}}", m.psi, g.sorted_labels(&m.nodes).join(","));
    }
    Ok(t.minima.iter().map(|m| m.nodes.len()).collect())
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (u, v) = match args.as_slice() {
        [u, v, ..] => (u.as_str(), v.as_str()),
        _ => ("25", "26"),
    };
    run(u, v).map(|_| ())
}

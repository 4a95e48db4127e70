// The full Ψ-landscape of a small graph, its exact minima, and how they
// compare to what the greedy search finds.
//
// `cargo run --example exact_landscape`

use nodecut::oracle::{exact_local_minima, Landscape};
use nodecut::{load_edge_list, run_all_seeds, ExploreOptions};

const BRIDGED_TRIANGLES: &str = "a b\nb c\nc a\nc d\nd e\ne f\nf d\n";

pub fn run() -> nodecut::Result<(usize, usize)> {
    let g = load_edge_list(BRIDGED_TRIANGLES, false)?.graph;
    let landscape = Landscape::build(&g, None)?;
    println!("{} connected subgraphs", landscape.len());

    let exact = exact_local_minima(&g, None)?;
    for c in &exact {
        println!("exact minimum {{{}}} psi={:.4}", g.sorted_labels(&c.nodes).join(","), c.psi);
    }
    let greedy = run_all_seeds(&g, &ExploreOptions::default())?;
    let missing = greedy.communities.iter().filter(|c| !exact.iter().any(|e| e.nodes == c.nodes)).count();
    println!("greedy found {}, {} not in the exact set", greedy.communities.len(), missing);
    Ok((exact.len(), missing))
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    run().map(|_| ())
}

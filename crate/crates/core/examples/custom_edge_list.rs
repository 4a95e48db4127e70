// Loading a weighted edge list from text and running the search on it.
//
// `cargo run --example custom_edge_list`

use nodecut::{load_edge_list, run_all_seeds, ExploreOptions};

const TEXT: &str = "\
# two weighted cliques joined by a light link
a b 2
a c 2
b c 2
c d 0.5
d e 2
d f 2
e f 2
a b 1
";

pub fn run() -> nodecut::Result<usize> {
    let loaded = load_edge_list(TEXT, true)?;
    for w in &loaded.warnings {
        println!("warning: {w:?}");
    }
    let g = loaded.graph;
    println!("{} nodes, {} links, weighted={}", g.node_count(), g.link_count(), g.is_weighted());
    let ex = run_all_seeds(&g, &ExploreOptions::default())?;
    for c in &ex.communities {
        println!("{{{}}} psi={:.4} seeds={}", g.sorted_labels(&c.nodes).join(","), c.psi, c.seed_count);
    }
    Ok(ex.communities.len())
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    run().map(|_| ())
}

// Ψ of a node set equals the normalised cut of its link set on the weighted
// line graph.
//
// `cargo run --example line_graph_equivalence`

use nodecut::line_graph::{back_projection, build_line_graph, normalized_affiliation};
use nodecut::{datasets, psi};

pub fn run() -> nodecut::Result<f64> {
    let g = datasets::karate();
    let lg = build_line_graph(&g)?;
    println!("line graph: {} vertices, {} stored entries", lg.link_count(), lg.adjacency().nnz());

    let d = normalized_affiliation(&g)?;
    let gram_diff = d.gram().max_abs_diff(lg.adjacency());
    println!("|D^T D - E|_max = {gram_diff:.2e}");
    let back = back_projection(&g)?;
    println!("back-projection has {} node pairs", back.len());

    let mut worst: f64 = 0.0;
    for labels in [&["1", "12"][..], &["3", "10", "34"], &["1", "5", "6", "7", "11", "17"]] {
        let c = g.nodes_from_labels(labels)?;
        let l = g.induced_links(&c);
        let phi = lg.phi(&l)?;
        let p = psi(&g, &c)?;
        worst = worst.max((phi - p).abs());
        println!("{{{}}}: psi={p:.6} phi={phi:.6}", labels.join(","));
    }
    println!("largest residual {worst:.2e}");
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    run().map(|_| ())
}

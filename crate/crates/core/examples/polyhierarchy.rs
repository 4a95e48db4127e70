// Containment DAG of the karate communities and the overlap class of each
// pair. Prints DOT on standard output.
//
// `cargo run --example polyhierarchy | dot -Tsvg > karate.svg`

use nodecut::hierarchy::{build_polyhierarchy, classify_overlap, default_names, OverlapKind};
use nodecut::{datasets, run_all_seeds, ExploreOptions};

pub fn run() -> nodecut::Result<Vec<(String, String, OverlapKind)>> {
    let g = datasets::karate();
    let ex = run_all_seeds(&g, &ExploreOptions::default())?;
    let names = default_names(ex.communities.len());
    let dag = build_polyhierarchy(&g, &ex.communities, &names);
    print!("{}", dag.to_dot());

    let mut pairs = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let rel = classify_overlap(&g, &ex.communities[i], &ex.communities[j]);
            eprintln!("{} {} {}", names[i], names[j], rel.kind.as_str());
            pairs.push((names[i].clone(), names[j].clone(), rel.kind));
        }
    }
    Ok(pairs)
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    run().map(|_| ())
}

// Greedy search from every link of Zachary's karate club and the resulting
// community table.
//
// `cargo run --example karate_table`

use nodecut::{datasets, run_all_seeds, ExploreOptions};

pub fn run() -> nodecut::Result<()> {
    let g = datasets::karate();
    let ex = run_all_seeds(&g, &ExploreOptions::default())?;

    println!("{:<4} {:>5} {:>5} {:>8} {:>6} {:>9}  boundary", "", "nodes", "links", "psi", "seeds", "stability");
    for (i, c) in ex.communities.iter().enumerate() {
        let stability = c.stability.map_or("-".to_string(), |s| format!("{s:.3}"));
        println!(
            "C{:<3} {:>5} {:>5} {:>8.3} {:>6} {:>9}  {}",
            i + 1,
            c.size(),
            c.links.len(),
            c.psi,
            c.seed_count,
            stability,
            g.sorted_labels(&c.boundary).join(" ")
        );
    }
    let hist: Vec<String> = ex.minima_histogram().iter().map(|(k, v)| format!("{v} seeds with {k}")).collect();
    println!("\nminima per seed: {}", hist.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    run()
}

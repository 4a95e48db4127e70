// How the minima-per-seed histogram moves with the tie-breaking rule.
//
// `cargo run --release --example tie_break_sensitivity -- 50`

use std::collections::BTreeMap;

use nodecut::{datasets, run_all_seeds, ExploreOptions, TieBreakPolicy};

pub fn run(rng_seeds: u64) -> nodecut::Result<BTreeMap<String, usize>> {
    let g = datasets::karate();
    let det = run_all_seeds(&g, &ExploreOptions::default())?;
    println!("det: {:?} ({} communities)", det.minima_histogram(), det.communities.len());

    let mut seen = BTreeMap::new();
    for s in 0..rng_seeds {
        let options = ExploreOptions { policy: TieBreakPolicy::random(s), ..Default::default() };
        let ex = run_all_seeds(&g, &options)?;
        *seen.entry(format!("{:?}", ex.minima_histogram())).or_insert(0) += 1;
    }
    for (hist, count) in &seen {
        println!("rng x{count:<3} {hist}");
    }
    Ok(seen)
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    run(n).map(|_| ())
}

// Growing and shrinking a subgraph one node at a time with O(degree) Ψ
// updates, checked against recomputation.
//
// `cargo run --example incremental_updates`

use nodecut::{datasets, psi, SubgraphState};

pub fn run() -> nodecut::Result<f64> {
    let g = datasets::karate();
    let start = g.nodes_from_labels(&["33", "34"])?;
    let mut s = SubgraphState::new(&g, &start)?;
    let mut drift: f64 = 0.0;
    for label in ["9", "31", "3", "24", "30"] {
        let i = g.node(label)?;
        let predicted = s.psi_after_add(i)?;
        s.apply_add(i)?;
        let fresh = psi(&g, s.members())?;
        drift = drift.max((predicted - fresh).abs());
        println!("+{label:<3} psi={predicted:.6} k_in={} boundary={}", s.k_in_total(), s.frontier().len());
    }
    let i = g.node("3")?;
    let predicted = s.psi_after_remove(i)?;
    s.apply_remove(i)?;
    drift = drift.max((predicted - psi(&g, s.members())?).abs());
    println!("-3   psi={predicted:.6}");
    println!("max drift {drift:.1e}");
    Ok(drift)
}

#[allow(dead_code)]
fn main() -> nodecut::Result<()> {
    run().map(|_| ())
}

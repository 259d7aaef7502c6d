//! Checking the transfer hypotheses: part balance, connectivity,
//! nonsingular `A_{G-p}` for every party, and a single kernel vector that
//! reaches every party.

use ctap::generators::star;
use ctap::viability::{check_viability, ViabilityReport};
use ctap::{build_graph, Result};

pub fn run_example() -> Result<Vec<ViabilityReport>> {
    // three arms of length two: viable for all three arm tips
    let good = star(3, 2)?;
    // claw: three V1 leaves on one V2 hub, so the parts are unbalanced and
    // the kernel is two-dimensional
    let bad = build_graph(3, 1, &[(0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0)], &[0, 1])?;
    let mut out = Vec::new();
    for (name, g) in [("star(3,2)", good), ("claw", bad)] {
        let report = check_viability(&g);
        println!("== {name}\n{}", report.to_text());
        out.push(report);
    }
    assert!(out[0].viable && !out[1].viable);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}

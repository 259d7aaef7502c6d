//! Two lower bounds on the gap: Cauchy interlacing through a deleted party
//! and the determinant divided by the largest possible eigenvalue.

use ctap::generators::{path, star, subdivided_tree};
use ctap::spectral::SpectralReport;

pub fn run_example() -> ctap::Result<Vec<SpectralReport>> {
    let mut out = Vec::new();
    for (name, g) in [
        ("path(5)", path(5)?),
        ("star(3,4)", star(3, 4)?),
        ("tree(2,3)", subdivided_tree(2, 3)?),
    ] {
        let r = SpectralReport::compute(&g)?;
        let gap = r.gap.expect("these graphs have a simple zero");
        let inter = r.interlacing_bound.as_ref().expect("parties present");
        let det = r.det_bound.as_ref().expect("parties present");
        let det_best = det.per_party.iter().map(|d| d.bound).fold(0.0, f64::max);
        println!(
            "{name:<10} gap={gap:.5}  interlacing ≥ {:.5} (party {})  determinant ≥ {det_best:.2e}",
            inter.value, inter.party
        );
        out.push(r);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

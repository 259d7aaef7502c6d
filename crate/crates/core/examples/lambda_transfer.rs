//! The three-level Λ system: pump and Stokes couplings ramped in the
//! counter-intuitive order move the population from site 0 to site 1 while
//! the middle site stays (almost) empty.

use ctap::dynamics::{default_schedule, evolve, Protocol, TransferResult};
use ctap::generators::path;

pub fn run_example() -> ctap::Result<Vec<(f64, TransferResult)>> {
    let g = path(3)?;
    let mut out = Vec::new();
    for total in [1.0, 10.0, 50.0, 200.0] {
        let protocol = Protocol::new(&g, default_schedule(&g, 0, 1, total, 1.0)?)?;
        let r = evolve(&protocol, (20.0 * total) as usize)?;
        println!(
            "T={total:>6}  E={:.3e}  max V2 population={:.3e}  phase={:+.4}",
            r.error, r.v2_population_max, r.acquired_phase
        );
        out.push((total, r));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

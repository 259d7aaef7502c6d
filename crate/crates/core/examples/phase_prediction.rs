//! The state arrives at the receiver with a phase fixed by the kernel
//! vector alone: arg(z_b · conj(z_a)). A complex coupling shifts it.

use ctap::dynamics::{default_schedule, evolve, phase_distance, transfer_phase_prediction, Protocol};
use ctap::{Edge, WeightedGraph};
use num_complex::Complex64;

pub fn run_example() -> ctap::Result<Vec<(f64, f64, f64)>> {
    let mut out = Vec::new();
    for theta in [0.0, 0.7, 1.5, 3.0] {
        let g = WeightedGraph::new(
            2,
            1,
            vec![Edge::new(0, 2, Complex64::from_polar(1.0, theta)), Edge::new(1, 2, 1.0)],
            vec![0, 1],
        )?;
        let predicted = transfer_phase_prediction(&g, 0, 1)?;
        let protocol = Protocol::new(&g, default_schedule(&g, 0, 1, 300.0, 1.0)?)?;
        let r = evolve(&protocol, 6000)?;
        println!(
            "θ={theta:.2}  predicted {predicted:+.4}  measured {:+.4}  (difference {:.1e}, E={:.1e})",
            r.acquired_phase,
            phase_distance(predicted, r.acquired_phase),
            r.error
        );
        out.push((theta, predicted, r.acquired_phase));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

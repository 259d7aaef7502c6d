//! The dark state F(t)⁻¹z under the simultaneous and the sequential ramps,
//! and a traced run showing where the population actually is.

use ctap::dynamics::{default_schedule, evolve_traced, sequential_schedule, Protocol, TraceRow};
use ctap::generators::path;

pub fn run_example() -> ctap::Result<Vec<TraceRow>> {
    let g = path(5)?;
    for (name, schedule) in [
        ("simultaneous", default_schedule(&g, 0, 2, 100.0, 1.0)?),
        ("sequential", sequential_schedule(&g, 0, 2, 100.0)?),
    ] {
        let p = Protocol::new(&g, schedule)?;
        println!("{name}:");
        for t in [0.0, 25.0, 50.0, 75.0, 100.0] {
            let z = p.dark_state_at(t)?;
            let amps: Vec<String> = z.iter().map(|x| format!("{:+.3}", x.re)).collect();
            println!("  t={t:>5}  z(t) = [{}]", amps.join(", "));
        }
    }

    let p = Protocol::new(&g, default_schedule(&g, 0, 2, 100.0, 1.0)?)?;
    let r = evolve_traced(&p, 2000)?;
    let rows = r.trace.expect("traced run");
    for row in rows.iter().step_by(500) {
        let pops: Vec<String> = row.populations.iter().map(|x| format!("{x:.3}")).collect();
        println!("t={:>5.1} populations [{}] gap {:.3}", row.t, pops.join(", "), row.gap.unwrap_or(0.0));
    }
    println!("final error {:.2e}", r.error);
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

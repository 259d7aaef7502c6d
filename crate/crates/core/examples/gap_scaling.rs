//! How the gap around the zero eigenvalue shrinks with graph size: paths
//! follow 2·sin(π/(n+1)), hexagonal grids fall off ever more steeply.

use ctap::experiments::{local_slopes, run_gap_scaling, FamilyRange, SweepConfig};
use ctap::generators::FamilySpec;

pub fn run_example() -> ctap::Result<Vec<(String, Vec<f64>)>> {
    let families = [
        (FamilySpec::Path { n: 3 }, (3..=41).step_by(2).collect::<Vec<_>>()),
        (FamilySpec::HexGrid { k: 2 }, (2..=6).collect()),
        (FamilySpec::Star { arms: 3, arm_length: 2 }, (2..=12).step_by(2).collect()),
    ];
    let mut out = Vec::new();
    for (family, sizes) in families {
        let config = SweepConfig {
            families: vec![FamilyRange { family: family.clone(), sizes }],
            ..Default::default()
        };
        let points = run_gap_scaling(&config)?.rows;
        let xs: Vec<f64> = points.iter().map(|p| p.n_vertices as f64).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.gap_mean).collect();
        let slopes = local_slopes(&xs, &ys);
        println!("{}:", family.name());
        for p in &points {
            println!("  |V|={:<4} gap={:.5}  1/|V|={:.5}", p.n_vertices, p.gap_mean, 1.0 / p.n_vertices as f64);
        }
        println!("  local log-log slopes: {slopes:.2?}");
        out.push((family.name().to_string(), slopes));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

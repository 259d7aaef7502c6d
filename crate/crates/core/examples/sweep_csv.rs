//! A small batch sweep written as CSV: randomised gap scaling of random
//! bipartite graphs, then T* over tree depth and straddle.

use ctap::experiments::{run_sweep, write_sweep_csv, Experiment, FamilyRange, SweepConfig};
use ctap::generators::FamilySpec;

pub fn run_example() -> ctap::Result<String> {
    let gaps = SweepConfig {
        families: vec![FamilyRange {
            family: FamilySpec::RandomBipartite { m: 2, p: 0.81, seed: 0 },
            sizes: (2..=6).collect(),
        }],
        trials: 20,
        randomize: true,
        ..Default::default()
    };
    let trees = SweepConfig {
        experiment: Experiment::TreeTstar,
        depths: vec![1, 2],
        straddles: vec![1.0, 10.0],
        ..Default::default()
    };
    let mut rows = run_sweep(&gaps)?.rows;
    rows.extend(run_sweep(&trees)?.rows);
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows)?;
    let text = String::from_utf8(buf).expect("csv is utf-8");
    print!("{text}");
    Ok(text)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

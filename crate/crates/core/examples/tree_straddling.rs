//! Transfer time T* between two far-apart leaves of subdivided binary
//! trees, with and without straddling the interior controls.
//!
//! Without straddling T* grows steeply with depth; with s = 10 it stays
//! close to 10·√k.

use ctap::dynamics::{find_tstar, TStarSearch};
use ctap::generators::{farthest_pair, subdivided_tree};

pub fn run_example(max_depth: usize) -> ctap::Result<Vec<(usize, f64, f64)>> {
    let mut rows = Vec::new();
    for straddle in [1.0, 10.0] {
        for k in 1..=max_depth {
            let tree = subdivided_tree(2, k)?;
            let ends = farthest_pair(&tree);
            let search = TStarSearch {
                straddle,
                ..Default::default()
            };
            let t = find_tstar(&tree, ends[0], ends[1], &search)?;
            println!(
                "s={straddle:<4} k={k} |V|={:<4} T*={:8.2}  10√k={:6.2}",
                tree.len(),
                t.tstar,
                10.0 * (k as f64).sqrt()
            );
            rows.push((k, straddle, t.tstar));
        }
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    let depth = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    run_example(depth)?;
    Ok(())
}

//! Pendant pairs do not change the kernel: strip them off a tree, then grow
//! a path back by hanging new pendants, predicting the new kernel amplitude.

use ctap::generators::{path, subdivided_tree};
use ctap::viability::{check_viability, extend_dangling, reduce_dangling, Attachment, Reduction};
use ctap::Part;
use num_complex::Complex64;

pub fn run_example() -> ctap::Result<(Reduction, Vec<Complex64>)> {
    let tree = subdivided_tree(2, 2)?.with_parties(vec![])?;
    let reduced = reduce_dangling(&tree);
    println!(
        "tree(2,2): {} vertices reduced to {} after removing {:?}",
        tree.len(),
        reduced.graph.len(),
        reduced.log.iter().map(|r| (r.dangling, r.neighbor)).collect::<Vec<_>>()
    );

    let mut g = path(3)?;
    let mut amplitudes = Vec::new();
    let mut tip = 1;
    for _ in 0..3 {
        let ext = extend_dangling(
            &g,
            &Attachment {
                part_of_u: Part::V2,
                edges: vec![(tip, Complex64::new(1.0, 0.0))],
                self_loop: None,
                pendant_weight: Complex64::new(0.5, 0.0),
            },
            true,
        )?;
        println!(
            "grew to {} vertices, nullity {} -> {}, new party {} has amplitude {:+.3}",
            ext.graph.len(),
            ext.nullity_before,
            ext.nullity_after,
            ext.v,
            ext.z_v.unwrap().re
        );
        amplitudes.push(ext.z_v.unwrap());
        assert!(check_viability(&ext.graph).viable);
        tip = ext.v;
        g = ext.graph;
    }
    Ok((reduced, amplitudes))
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

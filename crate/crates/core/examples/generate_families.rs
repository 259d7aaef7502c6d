//! Every built-in family at a small size, written in the text format and
//! read back.

use ctap::format::{parse, serialize};
use ctap::generators::FamilySpec;

pub fn run_example() -> ctap::Result<Vec<(String, usize, usize)>> {
    let specs = [
        FamilySpec::SubdividedTree { arity: 2, depth: 2 },
        FamilySpec::HexGrid { k: 2 },
        FamilySpec::SquareGrid { k: 3 },
        FamilySpec::Star { arms: 3, arm_length: 2 },
        FamilySpec::RandomBipartite { m: 3, p: 0.81, seed: 5 },
        FamilySpec::Path { n: 5 },
    ];
    let mut out = Vec::new();
    for spec in specs {
        let g = spec.build()?;
        let text = serialize(&g);
        assert_eq!(parse(&text)?, g);
        println!(
            "{spec}: |V1|={} |V2|={} edges={} parties={:?}",
            g.n1(),
            g.n2(),
            g.edges().len(),
            g.parties()
        );
        out.push((spec.to_string(), g.len(), g.edges().len()));
    }
    println!("\n{}", serialize(&FamilySpec::Path { n: 3 }.build()?));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> ctap::Result<()> {
    run_example()?;
    Ok(())
}

//! Line-based text format for graphs.
//!
//! ```text
//! # comment
//! graph v1=<n1> v2=<n2>
//! party <id> [<id> ...]
//! edge <u> <v> <re> [<im>]
//! ```
//!
//! Output is canonical: one `party` line with sorted ids, then edges sorted
//! by `(u, v)`. Weights are written with Rust's shortest round-trip float
//! formatting, so `parse(serialize(g)) == g` holds exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};

pub fn serialize(g: &WeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "graph v1={} v2={}", g.n1(), g.n2()).unwrap();
    if !g.parties().is_empty() {
        out.push_str("party");
        for p in g.parties() {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    for e in g.edges() {
        if e.weight.im == 0.0 {
            writeln!(out, "edge {} {} {:?}", e.u, e.v, e.weight.re).unwrap();
        } else {
            writeln!(out, "edge {} {} {:?} {:?}", e.u, e.v, e.weight.re, e.weight.im).unwrap();
        }
    }
    out
}

pub fn parse(text: &str) -> Result<WeightedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut parties = Vec::new();
    let mut edges = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        match keyword {
            "graph" => {
                if header.is_some() {
                    return Err(err("duplicate graph header".into()));
                }
                let mut n1 = None;
                let mut n2 = None;
                for tok in tokens {
                    let (key, value) = tok
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected key=value, got `{tok}`")))?;
                    let value: usize = value
                        .parse()
                        .map_err(|_| err(format!("bad count `{value}`")))?;
                    match key {
                        "v1" => n1 = Some(value),
                        "v2" => n2 = Some(value),
                        _ => return Err(err(format!("unknown header key `{key}`"))),
                    }
                }
                match (n1, n2) {
                    (Some(a), Some(b)) => header = Some((a, b)),
                    _ => return Err(err("header needs both v1= and v2=".into())),
                }
            }
            "party" => {
                for tok in tokens {
                    parties.push(
                        tok.parse::<usize>()
                            .map_err(|_| err(format!("bad party id `{tok}`")))?,
                    );
                }
            }
            "edge" => {
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 3 && fields.len() != 4 {
                    return Err(err("edge needs <u> <v> <re> [<im>]".into()));
                }
                let u = fields[0]
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad vertex `{}`", fields[0])))?;
                let v = fields[1]
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad vertex `{}`", fields[1])))?;
                let re = fields[2]
                    .parse::<f64>()
                    .map_err(|_| err(format!("bad weight `{}`", fields[2])))?;
                let im = match fields.get(3) {
                    Some(s) => s
                        .parse::<f64>()
                        .map_err(|_| err(format!("bad weight `{s}`")))?,
                    None => 0.0,
                };
                edges.push(Edge::new(u, v, Complex64::new(re, im)));
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let (n1, n2) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing `graph v1=.. v2=..` header".into(),
    })?;
    WeightedGraph::new(n1, n2, edges, parties)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    std::fs::write(path, serialize(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use proptest::prelude::*;

    #[test]
    fn lambda_text() {
        let g = build_graph(2, 1, &[(1, 2, 1.0), (0, 2, 1.0)], &[1, 0]).unwrap();
        let text = serialize(&g);
        assert_eq!(text, "graph v1=2 v2=1\nparty 0 1\nedge 0 2 1.0\nedge 1 2 1.0\n");
    }

    #[test]
    fn comments_and_imaginary_parts() {
        let g = parse("# a Λ system\ngraph v1=2 v2=1\nparty 0 1\n\nedge 0 2 0 1\nedge 2 1 1.5\n")
            .unwrap();
        assert_eq!(g.weight(0, 2), Complex64::new(0.0, 1.0));
        assert_eq!(g.weight(1, 2), Complex64::new(1.5, 0.0));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse("graph v1=2 v2=1\nedge 0 x 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("party 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("graph v1=2 v2=1\nedge 0 1 1\n"),
            Err(Error::SemiBipartiteViolation(0, 1))
        ));
    }

    fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
        (1usize..5, 0usize..5).prop_flat_map(|(n1, n2)| {
            let n = n1 + n2;
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u..n).map(move |v| (u, v)))
                .filter(|&(u, v)| v >= n1 || u >= n1)
                .filter(|&(u, v)| u != v || u >= n1)
                .collect();
            let k = pairs.len();
            (
                proptest::collection::vec(
                    (any::<bool>(), -3.0f64..3.0, -3.0f64..3.0, any::<bool>()),
                    k,
                ),
                proptest::collection::vec(any::<bool>(), n1),
            )
                .prop_map(move |(choice, flags)| {
                    let edges = pairs
                        .iter()
                        .zip(&choice)
                        .filter(|(_, c)| c.0 && c.1 != 0.0)
                        .map(|(&(u, v), &(_, re, im, cplx))| {
                            let im = if cplx && u != v { im } else { 0.0 };
                            Edge::new(u, v, Complex64::new(re, im))
                        })
                        .collect();
                    let parties = (0..n1).filter(|&i| flags[i]).collect();
                    WeightedGraph::new(n1, n2, edges, parties).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn round_trip(g in arb_graph()) {
            prop_assert_eq!(parse(&serialize(&g)).unwrap(), g);
        }
    }
}

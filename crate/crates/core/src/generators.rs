//! Graph families with canonical party sets.
//!
//! Every family except the random bipartite one satisfies `|V1| = |V2| + 1`
//! and is connected for all valid parameters.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{self, Domain};

/// Subdivided complete tree: every edge of the `arity`-ary tree of the given
/// depth gets a midpoint vertex.
///
/// V1 holds the tree vertices (breadth-first order, root 0) and V2 the
/// midpoints; the midpoint of the edge above tree vertex `c` has id
/// `n_tree + c - 1`. Parties are the leaves of the original tree.
pub fn subdivided_tree(arity: usize, depth: usize) -> Result<WeightedGraph> {
    if arity == 0 {
        return Err(Error::InvalidParameter("tree arity must be at least 1".into()));
    }
    let mut n_tree = 1usize;
    let mut level = 1usize;
    for _ in 0..depth {
        level = level
            .checked_mul(arity)
            .ok_or_else(|| Error::InvalidParameter("tree too large".into()))?;
        n_tree += level;
    }
    let parent = |c: usize| (c - 1) / arity;
    let mut edges = Vec::with_capacity(2 * (n_tree - 1));
    let mut tree_degree = vec![0usize; n_tree];
    for c in 1..n_tree {
        let mid = n_tree + c - 1;
        edges.push((c, mid, 1.0));
        edges.push((parent(c), mid, 1.0));
        tree_degree[c] += 1;
        tree_degree[parent(c)] += 1;
    }
    let leaves = (0..n_tree).filter(|&v| tree_degree[v] <= 1).collect();
    WeightedGraph::from_real_edges(n_tree, n_tree - 1, &edges, leaves)
}

/// Hexagonal (honeycomb) flake of `k x k` two-site unit cells with the
/// top-right site removed, `2k^2 - 1` sites in total.
///
/// Cells sit on a rhombic lattice. Cell `(i, j)` holds an A site (V1, id
/// `j*k + i`) and a B site (V2, id `k^2 + j*k + i`). Each A site bonds to
/// the B sites of cells `(i, j)`, `(i-1, j)` and `(i, j-1)`. The removed
/// site is B of cell `(k-1, k-1)`, which was dangling on A of the same cell.
pub fn hex_grid(k: usize) -> Result<WeightedGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("hex grid needs k >= 1".into()));
    }
    let cells = k * k;
    let a = |i: usize, j: usize| j * k + i;
    let b = |i: usize, j: usize| cells + j * k + i;
    let dropped = b(k - 1, k - 1);
    let mut edges = Vec::new();
    for j in 0..k {
        for i in 0..k {
            let mut targets = vec![b(i, j)];
            if i > 0 {
                targets.push(b(i - 1, j));
            }
            if j > 0 {
                targets.push(b(i, j - 1));
            }
            for t in targets.into_iter().filter(|&t| t != dropped) {
                edges.push((a(i, j), t, 1.0));
            }
        }
    }
    let g = WeightedGraph::from_real_edges(cells, cells - 1, &edges, vec![])?;
    let parties = farthest_pair(&g);
    g.with_parties(parties)
}

/// `k x k` grid graph, `k` odd. V1 is the colour class of the corners.
pub fn square_grid(k: usize) -> Result<WeightedGraph> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "square grid side must be odd and positive, got {k}"
        )));
    }
    let n1 = (k * k).div_ceil(2);
    let id = |r: usize, c: usize| {
        let linear = r * k + c;
        if (r + c).is_multiple_of(2) {
            linear / 2
        } else {
            n1 + linear / 2
        }
    };
    let mut edges = Vec::new();
    for r in 0..k {
        for c in 0..k {
            if c + 1 < k {
                edges.push((id(r, c), id(r, c + 1), 1.0));
            }
            if r + 1 < k {
                edges.push((id(r, c), id(r + 1, c), 1.0));
            }
        }
    }
    let g = WeightedGraph::from_real_edges(n1, k * k - n1, &edges, vec![])?;
    let parties = farthest_pair(&g);
    g.with_parties(parties)
}

/// `arms` chains of `arm_length` vertices attached to a centre vertex in V1.
///
/// Vertices at even distance from the centre are in V1, so the part sizes
/// balance exactly when `arm_length` is even; odd lengths are rejected.
/// Parties are the arm endpoints.
pub fn star(arms: usize, arm_length: usize) -> Result<WeightedGraph> {
    if arms == 0 || arm_length == 0 {
        return Err(Error::InvalidParameter(
            "star needs at least one arm of positive length".into(),
        ));
    }
    if arm_length % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "arm length {arm_length} is odd: arm endpoints would fall in V2 and \
             |V1| = 1 + {arms}*{} != |V2| + 1 = {}",
            arm_length / 2,
            arms * arm_length.div_ceil(2) + 1
        )));
    }
    let half = arm_length / 2;
    let n1 = 1 + arms * half;
    let n2 = arms * half;
    // distance d on arm r: even d -> V1 id 1 + r*half + d/2 - 1, odd d -> V2
    let id = |r: usize, d: usize| {
        if d == 0 {
            0
        } else if d.is_multiple_of(2) {
            1 + r * half + d / 2 - 1
        } else {
            n1 + r * half + d / 2
        }
    };
    let mut edges = Vec::new();
    let mut parties = Vec::new();
    for r in 0..arms {
        for d in 0..arm_length {
            edges.push((id(r, d), id(r, d + 1), 1.0));
        }
        parties.push(id(r, arm_length));
    }
    WeightedGraph::from_real_edges(n1, n2, &edges, parties)
}

/// Random bipartite graph with parts of size `m + 1` (V1) and `m` (V2);
/// each cross pair is an edge with probability `p`, decided by its own
/// keyed random stream.
pub fn random_bipartite(m: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    if m == 0 {
        return Err(Error::InvalidParameter("random bipartite needs m >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} is outside [0, 1]"
        )));
    }
    let n1 = m + 1;
    let mut edges = Vec::new();
    for i in 0..n1 {
        for j in 0..m {
            let index = (i * m + j) as u64;
            let draw: f64 = rng::stream(Domain::EdgePresence, seed, index).random();
            if draw < p {
                edges.push((i, n1 + j, 1.0));
            }
        }
    }
    let g = WeightedGraph::from_real_edges(n1, m, &edges, vec![])?;
    let parties = farthest_pair(&g);
    g.with_parties(parties)
}

/// Path on `n` vertices (`n` odd) with both endpoints as parties.
/// Positions alternate V1, V2, V1, ...; position `2i` has id `i`.
pub fn path(n: usize) -> Result<WeightedGraph> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "path length must be odd, got {n}"
        )));
    }
    let n1 = n.div_ceil(2);
    let id = |pos: usize| {
        if pos.is_multiple_of(2) {
            pos / 2
        } else {
            n1 + pos / 2
        }
    };
    let edges: Vec<_> = (0..n - 1).map(|pos| (id(pos), id(pos + 1), 1.0)).collect();
    let parties = if n == 1 { vec![0] } else { vec![0, n1 - 1] };
    WeightedGraph::from_real_edges(n1, n / 2, &edges, parties)
}

/// Two V1 vertices at maximum hop distance, ties broken towards the lowest
/// ids. Falls back to the lowest V1 ids when no V1 pair is connected.
pub fn farthest_pair(g: &WeightedGraph) -> Vec<usize> {
    farthest_pair_among(g, &(0..g.n1()).collect::<Vec<_>>())
}

/// [`farthest_pair`] restricted to `candidates`.
pub fn farthest_pair_among(g: &WeightedGraph, candidates: &[usize]) -> Vec<usize> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, &a) in candidates.iter().enumerate() {
        let dist = g.distances_from(a);
        for &b in &candidates[i + 1..] {
            if let Some(d) = dist[b] {
                let better = match best {
                    None => true,
                    Some((bd, ba, bb)) => d > bd || (d == bd && (a, b) < (ba, bb)),
                };
                if better {
                    best = Some((d, a, b));
                }
            }
        }
    }
    match best {
        Some((_, a, b)) => vec![a, b],
        None => candidates.iter().copied().take(2).collect(),
    }
}

/// A graph family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    SubdividedTree { arity: usize, depth: usize },
    HexGrid { k: usize },
    SquareGrid { k: usize },
    Star { arms: usize, arm_length: usize },
    RandomBipartite { m: usize, p: f64, seed: u64 },
    Path { n: usize },
}

pub const FAMILY_NAMES: [&str; 6] = [
    "subdivided_tree",
    "hex_grid",
    "square_grid",
    "star",
    "random_bipartite",
    "path",
];

impl FamilySpec {
    /// Builds a spec from a family name and a `key=value,...` parameter list.
    ///
    /// Missing size parameters default to the smallest valid instance; the
    /// tree arity defaults to 2, star arms to 3 and edge probability to 0.81.
    pub fn parse(name: &str, params: &str, seed: u64) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("expected key=value, got `{item}`"))
            })?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take_int = |keys: &[&str], default: usize| -> Result<usize> {
            for key in keys {
                if let Some(v) = kv.remove(*key) {
                    return v.parse().map_err(|_| {
                        Error::InvalidParameter(format!("parameter {key}={v} is not an integer"))
                    });
                }
            }
            Ok(default)
        };
        let spec = match name {
            "subdivided_tree" | "tree" => FamilySpec::SubdividedTree {
                arity: take_int(&["arity"], 2)?,
                depth: take_int(&["depth", "k"], 1)?,
            },
            "hex_grid" | "hex" => FamilySpec::HexGrid {
                k: take_int(&["k"], 1)?,
            },
            "square_grid" | "square" => FamilySpec::SquareGrid {
                k: take_int(&["k"], 1)?,
            },
            "star" => FamilySpec::Star {
                arms: take_int(&["arms"], 3)?,
                arm_length: take_int(&["arm_length", "m"], 2)?,
            },
            "random_bipartite" | "bipartite" => {
                let m = take_int(&["m"], 1)?;
                let p = match kv.remove("p") {
                    Some(v) => v.parse().map_err(|_| {
                        Error::InvalidParameter(format!("parameter p={v} is not a number"))
                    })?,
                    None => 0.81,
                };
                FamilySpec::RandomBipartite { m, p, seed }
            }
            "path" => FamilySpec::Path {
                n: take_int(&["n"], 3)?,
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family `{other}` (expected one of {})",
                    FAMILY_NAMES.join(", ")
                )))
            }
        };
        if let Some(key) = kv.keys().next() {
            return Err(Error::InvalidParameter(format!(
                "parameter `{key}` does not apply to family {}",
                spec.name()
            )));
        }
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::SubdividedTree { .. } => "subdivided_tree",
            FamilySpec::HexGrid { .. } => "hex_grid",
            FamilySpec::SquareGrid { .. } => "square_grid",
            FamilySpec::Star { .. } => "star",
            FamilySpec::RandomBipartite { .. } => "random_bipartite",
            FamilySpec::Path { .. } => "path",
        }
    }

    /// The parameter that grows the graph: depth, k, arm length, m or n.
    pub fn size(&self) -> usize {
        match *self {
            FamilySpec::SubdividedTree { depth, .. } => depth,
            FamilySpec::HexGrid { k } | FamilySpec::SquareGrid { k } => k,
            FamilySpec::Star { arm_length, .. } => arm_length,
            FamilySpec::RandomBipartite { m, .. } => m,
            FamilySpec::Path { n } => n,
        }
    }

    pub fn with_size(&self, size: usize) -> Self {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::SubdividedTree { depth, .. } => *depth = size,
            FamilySpec::HexGrid { k } | FamilySpec::SquareGrid { k } => *k = size,
            FamilySpec::Star { arm_length, .. } => *arm_length = size,
            FamilySpec::RandomBipartite { m, .. } => *m = size,
            FamilySpec::Path { n } => *n = size,
        }
        s
    }

    pub fn with_seed(&self, new_seed: u64) -> Self {
        let mut s = self.clone();
        if let FamilySpec::RandomBipartite { seed, .. } = &mut s {
            *seed = new_seed;
        }
        s
    }

    /// Whether the structure itself depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, FamilySpec::RandomBipartite { .. })
    }

    pub fn build(&self) -> Result<WeightedGraph> {
        match *self {
            FamilySpec::SubdividedTree { arity, depth } => subdivided_tree(arity, depth),
            FamilySpec::HexGrid { k } => hex_grid(k),
            FamilySpec::SquareGrid { k } => square_grid(k),
            FamilySpec::Star { arms, arm_length } => star(arms, arm_length),
            FamilySpec::RandomBipartite { m, p, seed } => random_bipartite(m, p, seed),
            FamilySpec::Path { n } => path(n),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::SubdividedTree { arity, depth } => {
                write!(f, "subdivided_tree(arity={arity},depth={depth})")
            }
            FamilySpec::HexGrid { k } => write!(f, "hex_grid(k={k})"),
            FamilySpec::SquareGrid { k } => write!(f, "square_grid(k={k})"),
            FamilySpec::Star { arms, arm_length } => {
                write!(f, "star(arms={arms},arm_length={arm_length})")
            }
            FamilySpec::RandomBipartite { m, p, seed } => {
                write!(f, "random_bipartite(m={m},p={p},seed={seed})")
            }
            FamilySpec::Path { n } => write!(f, "path(n={n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent 2-colouring by BFS; returns colour class sizes with the
    /// class of `root` first, or None if an odd cycle exists.
    fn two_colour(g: &WeightedGraph, root: usize) -> Option<(usize, usize)> {
        let adj = g.neighbors();
        let mut colour = vec![None; g.len()];
        colour[root] = Some(0u8);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                match colour[y] {
                    None => {
                        colour[y] = Some(1 - colour[x].unwrap());
                        queue.push_back(y);
                    }
                    Some(c) if c == colour[x].unwrap() => return None,
                    _ => {}
                }
            }
        }
        let zeros = colour.iter().filter(|c| **c == Some(0)).count();
        Some((zeros, g.len() - zeros))
    }

    fn is_bipartite_split(g: &WeightedGraph) -> bool {
        g.edges().iter().all(|e| (e.u < g.n1()) != (e.v < g.n1()))
    }

    #[test]
    fn tree_counts() {
        let t = subdivided_tree(2, 1).unwrap();
        assert_eq!((t.n1(), t.n2()), (3, 2));
        assert_eq!(t.parties(), &[1, 2]);
        let t = subdivided_tree(2, 2).unwrap();
        assert_eq!(t.len(), 13);
        assert_eq!(t.parties().len(), 4);
        let t = subdivided_tree(2, 0).unwrap();
        assert_eq!((t.n1(), t.n2()), (1, 0));
        assert_eq!(t.parties(), &[0]);
        for depth in 0..6 {
            let t = subdivided_tree(2, depth).unwrap();
            assert_eq!(t.n1(), (1 << (depth + 1)) - 1);
            assert_eq!(t.parties().len(), 1 << depth);
        }
        // arity 1 is a path whose two ends are leaves
        let t = subdivided_tree(1, 2).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.parties(), &[0, 2]);
    }

    #[test]
    fn hex_counts_and_shape() {
        assert_eq!(hex_grid(1).unwrap().len(), 1);
        assert_eq!(hex_grid(2).unwrap().len(), 7);
        let h = hex_grid(3).unwrap();
        assert_eq!(h.len(), 17);
        assert_eq!((h.n1(), h.n2()), (9, 8));
        // 2-colouring oracle agrees with the stored parts
        assert_eq!(two_colour(&h, 0), Some((9, 8)));
        for k in 1..=7 {
            let h = hex_grid(k).unwrap();
            assert_eq!(h.len(), 2 * k * k - 1);
            assert!(is_bipartite_split(&h));
            assert!(h.is_connected());
            assert!((0..h.len()).all(|v| h.degree(v) <= 3));
            if k >= 2 {
                assert!((0..h.len()).any(|v| h.degree(v) == 3));
            }
        }
    }

    #[test]
    fn square_counts() {
        let s = square_grid(3).unwrap();
        assert_eq!((s.n1(), s.n2()), (5, 4));
        assert_eq!(s.parties(), &[0, 4]);
        assert_eq!(square_grid(1).unwrap().len(), 1);
        assert!(matches!(square_grid(2), Err(Error::InvalidParameter(_))));
        assert_eq!(two_colour(&square_grid(5).unwrap(), 0), Some((13, 12)));
    }

    #[test]
    fn star_counts() {
        let s = star(3, 2).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(s.parties().len(), 3);
        assert!(s.parties().iter().all(|&p| s.degree(p) == 1));
        assert_eq!(star(3, 4).unwrap().len(), 13);
        assert!(matches!(star(3, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(star(2, 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn random_bipartite_edges() {
        let g = random_bipartite(1, 1.0, 99).unwrap();
        let lambda = path(3).unwrap();
        assert_eq!(g.adjacency(), lambda.adjacency());
        let g = random_bipartite(3, 0.0, 5).unwrap();
        assert!(g.edges().is_empty());
        assert!(!g.is_connected());
        let g = random_bipartite(5, 0.81, 42).unwrap();
        assert!(g.edges().len() <= 30);
        assert_eq!(g, random_bipartite(5, 0.81, 42).unwrap());
        assert!(random_bipartite(2, 1.5, 0).is_err());
    }

    #[test]
    fn random_bipartite_mean_edge_count() {
        // Binomial(30, 0.81): mean 24.3, sd 2.149; over 10^4 seeds the sample
        // mean has sd 0.0215, so 5 sd is 0.11.
        let seeds = 10_000u64;
        let total: usize = (0..seeds)
            .map(|s| random_bipartite(5, 0.81, s).unwrap().edges().len())
            .sum();
        let mean = total as f64 / seeds as f64;
        assert!((mean - 24.3).abs() < 0.11, "mean {mean}");
    }

    #[test]
    fn path_parts() {
        let p = path(3).unwrap();
        assert_eq!(p.adjacency().real_part().as_slice(), &[0., 0., 1., 0., 0., 1., 1., 1., 0.]);
        let p = path(5).unwrap();
        assert_eq!((p.n1(), p.n2()), (3, 2));
        assert_eq!(p.parties(), &[0, 2]);
        assert!(matches!(path(4), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn families_are_balanced_and_connected() {
        let mut graphs = Vec::new();
        for d in 0..5 {
            graphs.push(subdivided_tree(2, d).unwrap());
            graphs.push(subdivided_tree(3, d.min(3)).unwrap());
        }
        for k in 1..7 {
            graphs.push(hex_grid(k).unwrap());
        }
        for k in (1..10).step_by(2) {
            graphs.push(square_grid(k).unwrap());
        }
        for m in (2..12).step_by(2) {
            graphs.push(star(3, m).unwrap());
            graphs.push(star(5, m).unwrap());
        }
        for n in (1..30).step_by(2) {
            graphs.push(path(n).unwrap());
        }
        for g in &graphs {
            assert!(g.is_balanced(), "{g:?}");
            assert!(g.is_connected());
            assert!(g.parties().iter().all(|&p| p < g.n1()));
        }
        for m in 1..10 {
            assert!(random_bipartite(m, 0.81, m as u64).unwrap().is_balanced());
        }
    }

    #[test]
    fn family_spec_parsing() {
        let s = FamilySpec::parse("star", "arms=4,m=6", 0).unwrap();
        assert_eq!(s, FamilySpec::Star { arms: 4, arm_length: 6 });
        assert_eq!(s.build().unwrap().len(), 25);
        let s = FamilySpec::parse("random_bipartite", "m=4", 9).unwrap();
        assert_eq!(s, FamilySpec::RandomBipartite { m: 4, p: 0.81, seed: 9 });
        assert_eq!(s.with_size(7).size(), 7);
        assert!(FamilySpec::parse("hex_grid", "m=3", 0).is_err());
        assert!(FamilySpec::parse("triangle", "", 0).is_err());
    }
}

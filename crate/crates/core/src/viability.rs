//! Deciding whether a graph and party set support adiabatic transfer.
//!
//! A connected semi-bipartite graph with `|V1| = |V2| + 1` is viable for a
//! party set `P` when, for every party `p`, `A_{G-p}` is nonsingular, or
//! equivalently when `A_G` has a one-dimensional kernel with nonzero
//! amplitude on every party. Both routes are computed and reported, along
//! with a perfect-matching certificate for each `G - p`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, Edge, Part, WeightedGraph};
use crate::linalg;
use crate::matching::hopcroft_karp;
use crate::rng::{self, Domain};

/// Eigenvalues with `|λ| < ZERO_TOL * max(1, ‖A‖₂)` count as zero.
pub const ZERO_TOL: f64 = 1e-9;

/// Kernel amplitudes (of a unit vector) below this count as zero.
pub const SUPPORT_TOL: f64 = 1e-9;

/// V2 amplitudes of a balanced graph's kernel vector below this are
/// rounding noise and get snapped to exactly zero.
pub const SNAP_TOL: f64 = 1e-6;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Number of eigenvalues classified as zero.
pub fn nullity(matrix: &DMatrix<Complex64>, tolerance: f64) -> Result<usize> {
    let values = linalg::eigvalsh(matrix)?;
    let scale = linalg::spectral_norm_of(&values).max(1.0);
    Ok(values.iter().filter(|x| x.abs() < tolerance * scale).count())
}

/// Unit kernel vector of an adjacency matrix with one-dimensional kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroVector {
    pub vector: DVector<Complex64>,
    /// Largest V2 amplitude before snapping (0 for unbalanced matrices,
    /// where no snapping happens).
    pub v2_residual: f64,
}

/// Unit-norm kernel vector, phase-normalised so the first nonzero entry is
/// real and positive. For balanced block sizes the V2 entries are snapped
/// to exact zero once they fall below [`SNAP_TOL`].
pub fn zero_eigenvector(adj: &AdjacencyMatrix, tolerance: f64) -> Result<ZeroVector> {
    let (values, vectors) = linalg::eigh(adj.entries())?;
    let scale = linalg::spectral_norm_of(&values).max(1.0);
    let zeros: Vec<usize> = (0..values.len())
        .filter(|&i| values[i].abs() < tolerance * scale)
        .collect();
    if zeros.len() != 1 {
        return Err(Error::DegenerateKernel(zeros.len()));
    }
    let mut v = vectors.column(zeros[0]).into_owned();

    let (n1, n2) = adj.block_sizes();
    let mut v2_residual = 0.0;
    if n1 == n2 + 1 {
        v2_residual = v.rows(n1, n2).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if v2_residual < SNAP_TOL {
            v.rows_mut(n1, n2).fill(zero());
            let len = linalg::norm(&v);
            v /= Complex64::new(len, 0.0);
        }
    }
    normalize_phase(&mut v);
    Ok(ZeroVector {
        vector: v,
        v2_residual,
    })
}

fn normalize_phase(v: &mut DVector<Complex64>) {
    let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-8 * largest) {
        let phase = first.conj() / first.norm();
        *v *= phase;
    }
}

fn check_v1(graph: &WeightedGraph, p: usize) -> Result<()> {
    if p >= graph.n1() {
        return Err(Error::PartyPlacement(
            p,
            format!("vertex is not in V1 (|V1| = {})", graph.n1()),
        ));
    }
    Ok(())
}

/// Outcome of the perfect-matching search in `G - p`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingOutcome {
    pub exists: bool,
    /// Matched `(V1 vertex, V2 vertex)` pairs in the ids of `G`.
    pub pairs: Vec<(usize, usize)>,
    pub reason: Option<String>,
}

/// Whether `G - p` has a perfect matching. With `|V1 \ {p}| = |V2|` and V1
/// independent, only V1–V2 edges can take part, so the search runs on that
/// bipartite restriction.
pub fn has_matching_without(graph: &WeightedGraph, p: usize) -> Result<MatchingOutcome> {
    check_v1(graph, p)?;
    let n1 = graph.n1();
    let left: Vec<usize> = (0..n1).filter(|&u| u != p).collect();
    let mut adj = vec![Vec::new(); left.len()];
    for e in graph.edges() {
        // u < v always, and V1 ids precede V2 ids
        if e.u < n1 && e.v >= n1 && e.u != p {
            let l = if e.u < p { e.u } else { e.u - 1 };
            adj[l].push(e.v - n1);
        }
    }
    let matched = hopcroft_karp(&adj, graph.n2());
    let pairs: Vec<(usize, usize)> = matched
        .iter()
        .enumerate()
        .filter_map(|(l, r)| r.map(|r| (left[l], n1 + r)))
        .collect();

    if !graph.is_balanced() {
        return Ok(MatchingOutcome {
            exists: false,
            pairs,
            reason: Some(format!(
                "unbalanced parts: |V1| = {}, |V2| = {}",
                graph.n1(),
                graph.n2()
            )),
        });
    }
    let exists = pairs.len() == graph.n2();
    let reason = (!exists).then(|| {
        format!(
            "maximum matching covers {} of {} V2 vertices",
            pairs.len(),
            graph.n2()
        )
    });
    Ok(MatchingOutcome {
        exists,
        pairs,
        reason,
    })
}

/// `det(A_{G-p})`, computed by pivoted LU. Returns an exact zero when the
/// matrix is structurally singular: more V1 than V2 vertices remain, or
/// they are equal in number but admit no perfect matching.
pub fn det_without(graph: &WeightedGraph, p: usize) -> Result<Complex64> {
    check_v1(graph, p)?;
    let rest_v1 = graph.n1() - 1;
    let structurally_singular = match rest_v1.cmp(&graph.n2()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => !has_matching_without(graph, p)?.exists,
        std::cmp::Ordering::Less => false,
    };
    if structurally_singular {
        return Ok(zero());
    }
    let sub = graph.adjacency().without(p)?;
    Ok(linalg::determinant(sub.entries()))
}

/// Whether `det(A_{G-p})` counts as nonzero. When `|V1| - 1 = |V2|` the
/// determinant is `±det(B̃)²` with `B̃` the V1∖{p} × V2 block, so the test
/// is on the smallest singular value of `B̃` (the squared quantity would
/// need the squared tolerance). Otherwise no eigenvalue of `A_{G-p}` may
/// fall below the zero tolerance.
pub fn det_is_nonzero(graph: &WeightedGraph, p: usize) -> Result<bool> {
    let det = det_without(graph, p)?;
    det_nonzero(graph, p, det)
}

fn det_nonzero(graph: &WeightedGraph, p: usize, det: Complex64) -> Result<bool> {
    if det == zero() {
        return Ok(false);
    }
    let sub = graph.adjacency().without(p)?;
    let (n1, n2) = sub.block_sizes();
    if n1 == n2 {
        let b = sub.entries().view((0, n1), (n1, n2)).into_owned();
        if n1 == 0 {
            return Ok(true);
        }
        let sv = b.singular_values();
        let largest = sv.iter().copied().fold(0.0, f64::max);
        let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(smallest > ZERO_TOL * largest.max(1.0));
    }
    Ok(nullity(sub.entries(), ZERO_TOL)? == 0)
}

/// Multiplies each edge weight by an independent uniform draw from `(0, 2]`.
/// The draw for edge `i` (in canonical edge order) depends only on
/// `(seed, i)`.
pub fn randomize_weights(graph: &WeightedGraph, seed: u64) -> WeightedGraph {
    graph
        .map_weights(|i, e| e.weight * weight_factor(seed, i as u64))
        .expect("scaling by a positive factor keeps a valid graph valid")
}

fn weight_factor(seed: u64, index: u64) -> f64 {
    let u: f64 = rng::stream(Domain::WeightPerturbation, seed, index).random();
    2.0 * (1.0 - u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartyCheck {
    pub party: usize,
    pub det_value: Complex64,
    pub det_nonzero: bool,
    pub matching_exists: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViabilityReport {
    pub balanced: bool,
    pub connected: bool,
    pub per_party: Vec<PartyCheck>,
    pub zero_space_dim: usize,
    pub zero_vector: Option<DVector<Complex64>>,
    pub zero_support_ok: bool,
    pub viable: bool,
}

impl ViabilityReport {
    pub fn all_det_nonzero(&self) -> bool {
        self.per_party.iter().all(|c| c.det_nonzero)
    }

    /// Unique kernel vector supported on every party.
    pub fn kernel_condition(&self) -> bool {
        self.zero_space_dim == 1 && self.zero_support_ok
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(out, "{:<18}{}", "balanced", yn(self.balanced)).unwrap();
        writeln!(out, "{:<18}{}", "connected", yn(self.connected)).unwrap();
        writeln!(out, "{:<18}{}", "zero space dim", self.zero_space_dim).unwrap();
        writeln!(out, "{:<18}{}", "party support", yn(self.zero_support_ok)).unwrap();
        writeln!(out, "{:<18}{}", "viable", yn(self.viable)).unwrap();
        writeln!(
            out,
            "\n{:>6}  {:>24}  {:>8}  {:>8}",
            "party", "det(A_{G-p})", "nonzero", "matching"
        )
        .unwrap();
        for c in &self.per_party {
            writeln!(
                out,
                "{:>6}  {:>24}  {:>8}  {:>8}",
                c.party,
                format_complex(c.det_value),
                yn(c.det_nonzero),
                yn(c.matching_exists)
            )
            .unwrap();
        }
        if let Some(z) = &self.zero_vector {
            out.push_str("\nzero vector:");
            for x in z.iter() {
                write!(out, " {}", format_complex(*x)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        writeln!(out, "balanced={}", self.balanced).unwrap();
        writeln!(out, "connected={}", self.connected).unwrap();
        writeln!(out, "zero_space_dim={}", self.zero_space_dim).unwrap();
        writeln!(out, "zero_support_ok={}", self.zero_support_ok).unwrap();
        writeln!(out, "viable={}", self.viable).unwrap();
        for c in &self.per_party {
            writeln!(
                out,
                "party.{}.det={}",
                c.party,
                format_complex(c.det_value)
            )
            .unwrap();
            writeln!(out, "party.{}.det_nonzero={}", c.party, c.det_nonzero).unwrap();
            writeln!(out, "party.{}.matching={}", c.party, c.matching_exists).unwrap();
        }
        out
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6e}", z.re)
    } else {
        format!("{:.6e}{:+.6e}i", z.re, z.im)
    }
}

/// Evaluates every hypothesis of the transfer theorem for `graph` and its
/// parties. Failures are reported in the returned value, never raised.
pub fn check_viability(graph: &WeightedGraph) -> ViabilityReport {
    let balanced = graph.is_balanced();
    let connected = graph.is_connected();
    let adj = graph.adjacency();

    let per_party: Vec<PartyCheck> = graph
        .parties()
        .iter()
        .map(|&p| {
            let det_value = det_without(graph, p).unwrap_or(zero());
            let det_nonzero = det_nonzero(graph, p, det_value).unwrap_or(false);
            let matching_exists = has_matching_without(graph, p)
                .map(|m| m.exists)
                .unwrap_or(false);
            PartyCheck {
                party: p,
                det_value,
                det_nonzero,
                matching_exists,
            }
        })
        .collect();

    let zero_space_dim = nullity(adj.entries(), ZERO_TOL).unwrap_or(0);
    let zero_vector = if zero_space_dim == 1 {
        zero_eigenvector(&adj, ZERO_TOL).ok().map(|z| z.vector)
    } else {
        None
    };
    let zero_support_ok = match &zero_vector {
        Some(z) => graph.parties().iter().all(|&p| z[p].norm() > SUPPORT_TOL),
        None => false,
    };
    let viable = balanced
        && connected
        && !graph.parties().is_empty()
        && per_party.iter().all(|c| c.det_nonzero)
        && zero_space_dim == 1
        && zero_support_ok;

    ViabilityReport {
        balanced,
        connected,
        per_party,
        zero_space_dim,
        zero_vector,
        zero_support_ok,
        viable,
    }
}

/// One removal step of [`reduce_dangling`], in the original vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemovedPair {
    pub dangling: usize,
    pub neighbor: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub graph: WeightedGraph,
    pub log: Vec<RemovedPair>,
    /// Original id of each surviving vertex.
    pub original_ids: Vec<usize>,
}

/// Repeatedly removes a degree-1 vertex together with its neighbour, both
/// outside the party set, lowest dangling id first. A removal that would
/// increase the number of connected components is skipped.
pub fn reduce_dangling(graph: &WeightedGraph) -> Reduction {
    let mut current = graph.clone();
    let mut ids: Vec<usize> = (0..graph.len()).collect();
    let mut log = Vec::new();

    'outer: loop {
        let adj = current.neighbors();
        let components = current.component_count();
        for v in 0..current.len() {
            if adj[v].len() != 1 || current.has_loop(v) || current.parties().contains(&v) {
                continue;
            }
            let u = adj[v][0];
            if current.parties().contains(&u) {
                continue;
            }
            let (next, map) = current
                .delete_vertices(&[v, u])
                .expect("both vertices exist");
            if next.component_count() > components {
                continue;
            }
            log.push(RemovedPair {
                dangling: ids[v],
                neighbor: ids[u],
            });
            let mut new_ids = vec![0; next.len()];
            for (old, slot) in map.iter().enumerate() {
                if let Some(new) = slot {
                    new_ids[*new] = ids[old];
                }
            }
            ids = new_ids;
            current = next;
            continue 'outer;
        }
        break;
    }

    Reduction {
        graph: current,
        log,
        original_ids: ids,
    }
}

/// How a new vertex `u` joins the graph before a pendant vertex `v` is
/// hung on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Attachment {
    pub part_of_u: Part,
    /// `(existing vertex, weight A[u][x])` for each edge of `u`.
    pub edges: Vec<(usize, Complex64)>,
    /// Optional real self-loop on `u` (only allowed when `u` is in V2).
    pub self_loop: Option<f64>,
    /// Weight `A[u][v]` of the pendant edge.
    pub pendant_weight: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    pub graph: WeightedGraph,
    pub u: usize,
    pub v: usize,
    /// Amplitude of `v` in the (unnormalised) extended kernel vector,
    /// `-(b · z̃) / A[u][v]`, when the original kernel is one-dimensional.
    pub z_v: Option<Complex64>,
    pub nullity_before: usize,
    pub nullity_after: usize,
}

/// Adds a vertex `u` wired as described by `attach`, then a vertex `v`
/// adjacent only to `u`. The kernel dimension is unchanged. With
/// `new_party`, `v` joins the parties, which requires `v` in V1 (so `u` in
/// V2) and a nonzero kernel amplitude on `v`.
pub fn extend_dangling(
    graph: &WeightedGraph,
    attach: &Attachment,
    new_party: bool,
) -> Result<Extension> {
    let n1 = graph.n1();
    let n2 = graph.n2();
    if attach.pendant_weight == zero() {
        return Err(Error::ZeroWeight(0, 0));
    }
    if new_party && attach.part_of_u == Part::V1 {
        return Err(Error::PartyPlacement(
            n1,
            "a pendant on a V1 vertex lies in V2".into(),
        ));
    }
    if attach.self_loop.is_some() && attach.part_of_u == Part::V1 {
        return Err(Error::SemiBipartiteViolation(n1, n1));
    }

    // Old V1 ids are kept, old V2 ids shift by one to make room for the new
    // V1 vertex at index n1; the new V2 vertex goes last.
    let shift = |x: usize| if x < n1 { x } else { x + 1 };
    let new_v1 = n1;
    let new_v2 = n1 + 1 + n2;
    let (u, v) = match attach.part_of_u {
        Part::V1 => (new_v1, new_v2),
        Part::V2 => (new_v2, new_v1),
    };

    let mut edges: Vec<Edge> = graph
        .edges()
        .iter()
        .map(|e| Edge::new(shift(e.u), shift(e.v), e.weight))
        .collect();
    for &(x, w) in &attach.edges {
        if x >= graph.len() {
            return Err(Error::NoSuchVertex(x));
        }
        if attach.part_of_u == Part::V1 && x < n1 {
            return Err(Error::SemiBipartiteViolation(u, shift(x)));
        }
        edges.push(Edge::new(u, shift(x), w));
    }
    if let Some(w) = attach.self_loop {
        edges.push(Edge::new(u, u, w));
    }
    edges.push(Edge::new(u, v, attach.pendant_weight));

    let parties: Vec<usize> = graph.parties().to_vec();
    let extended = WeightedGraph::new(n1 + 1, n2 + 1, edges, parties.clone())?;

    let nullity_before = nullity(graph.adjacency().entries(), ZERO_TOL)?;
    let adj = extended.adjacency();
    let nullity_after = nullity(adj.entries(), ZERO_TOL)?;

    let z_v = if nullity_before == 1 {
        let z = zero_eigenvector(&graph.adjacency(), ZERO_TOL)?.vector;
        let b_dot_z: Complex64 = (0..graph.len())
            .map(|x| adj.entries()[(u, shift(x))] * z[x])
            .sum();
        Some(-b_dot_z / adj.entries()[(u, v)])
    } else {
        None
    };

    let graph = if new_party {
        let zv = z_v.ok_or(Error::DegenerateKernel(nullity_before))?;
        // |z_v| relative to the norm of the extended (z̃, 0, z_v)
        let rel = zv.norm() / (1.0 + zv.norm_sqr()).sqrt();
        if rel <= SUPPORT_TOL {
            return Err(Error::PartyUnsupported(v));
        }
        let mut with_v = parties;
        with_v.push(v);
        extended.with_parties(with_v)?
    } else {
        extended
    };

    Ok(Extension {
        graph,
        u,
        v,
        z_v,
        nullity_before,
        nullity_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path, star, subdivided_tree};
    use crate::graph::build_graph;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &DVector<Complex64>, b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn nullity_examples() {
        assert_eq!(nullity(path(3).unwrap().adjacency().entries(), ZERO_TOL).unwrap(), 1);
        assert_eq!(nullity(path(5).unwrap().adjacency().entries(), ZERO_TOL).unwrap(), 1);
        assert_eq!(nullity(&DMatrix::from_element(2, 2, zero()), ZERO_TOL).unwrap(), 2);
        let bad = DMatrix::from_row_slice(2, 2, &[zero(), c(1., 0.), c(3., 0.), zero()]);
        assert!(matches!(nullity(&bad, ZERO_TOL), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn kernel_of_lambda() {
        let z = zero_eigenvector(&path(3).unwrap().adjacency(), ZERO_TOL).unwrap();
        let s = 0.5f64.sqrt();
        assert!(close(&z.vector, &[c(s, 0.), c(-s, 0.), zero()], 1e-12));
        assert_eq!(z.vector[2], zero());
    }

    #[test]
    fn kernel_of_path5() {
        // path order 0-3-1-4-2, kernel (1,0,-1,0,1)/√3 along the path
        let z = zero_eigenvector(&path(5).unwrap().adjacency(), ZERO_TOL).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(close(&z.vector, &[c(s, 0.), c(-s, 0.), c(s, 0.), zero(), zero()], 1e-12));
        assert!(z.v2_residual < 1e-8);
    }

    #[test]
    fn kernel_of_weighted_lambda() {
        // Ω_P = 0.7 on (0,2), Ω_S = 1.9 on (1,2): z ∝ (1/Ω_P, -1/Ω_S, 0)
        let (wp, ws) = (0.7, 1.9);
        let g = build_graph(2, 1, &[(0, 2, wp), (1, 2, ws)], &[0, 1]).unwrap();
        let z = zero_eigenvector(&g.adjacency(), ZERO_TOL).unwrap().vector;
        let norm = (1.0 / (wp * wp) + 1.0 / (ws * ws)).sqrt();
        let expect = [c(1.0 / wp / norm, 0.), c(-1.0 / ws / norm, 0.), zero()];
        assert!(close(&z, &expect, 1e-12));
    }

    #[test]
    fn degenerate_kernel_is_an_error() {
        let adj = AdjacencyMatrix::from_matrix(DMatrix::from_element(2, 2, zero()), 1).unwrap();
        assert_eq!(
            zero_eigenvector(&adj, ZERO_TOL).unwrap_err(),
            Error::DegenerateKernel(2)
        );
    }

    #[test]
    fn det_without_examples() {
        let lambda = path(3).unwrap();
        assert!((det_without(&lambda, 0).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        let p5 = path(5).unwrap();
        assert!((det_without(&p5, 0).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        // claw with centre in V2: V1 = {0,1,2}, V2 = {3}
        let claw = build_graph(3, 1, &[(0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0)], &[0]).unwrap();
        assert!(!claw.is_balanced());
        assert_eq!(det_without(&claw, 0).unwrap(), zero());
        assert!(matches!(det_without(&lambda, 2), Err(Error::PartyPlacement(2, _))));
    }

    #[test]
    fn matching_examples() {
        let m = has_matching_without(&path(3).unwrap(), 0).unwrap();
        assert!(m.exists);
        assert_eq!(m.pairs, vec![(1, 2)]);
        assert!(has_matching_without(&path(5).unwrap(), 0).unwrap().exists);
        let claw = build_graph(3, 1, &[(0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0)], &[0]).unwrap();
        let m = has_matching_without(&claw, 0).unwrap();
        assert!(!m.exists);
        assert!(m.reason.unwrap().contains("unbalanced"));
    }

    /// Exhaustive oracle: try every assignment of remaining V1 vertices to V2
    /// vertices along edges.
    fn brute_force_matching(g: &WeightedGraph, p: usize) -> bool {
        fn go(left: &[usize], used: &mut Vec<bool>, g: &WeightedGraph) -> bool {
            let Some((&x, rest)) = left.split_first() else {
                return true;
            };
            for y in g.n1()..g.len() {
                if !used[y - g.n1()] && g.weight(x, y) != Complex64::new(0.0, 0.0) {
                    used[y - g.n1()] = true;
                    if go(rest, used, g) {
                        return true;
                    }
                    used[y - g.n1()] = false;
                }
            }
            false
        }
        let left: Vec<usize> = (0..g.n1()).filter(|&x| x != p).collect();
        left.len() == g.n2() && go(&left, &mut vec![false; g.n2()], g)
    }

    #[test]
    fn tree_matchings_agree_with_brute_force() {
        let t = subdivided_tree(2, 2).unwrap();
        for &p in t.parties() {
            assert!(brute_force_matching(&t, p));
            assert!(has_matching_without(&t, p).unwrap().exists);
        }
        for p in 0..t.n1() {
            assert_eq!(
                has_matching_without(&t, p).unwrap().exists,
                brute_force_matching(&t, p)
            );
        }
    }

    #[test]
    fn randomized_weights_are_deterministic_and_bounded() {
        let g = path(3).unwrap();
        let a = randomize_weights(&g, 1);
        assert_eq!(a, randomize_weights(&g, 1));
        assert_ne!(a, randomize_weights(&g, 2));
        for e in a.edges() {
            assert!(e.weight.re > 0.0 && e.weight.re <= 2.0 && e.weight.im == 0.0);
        }
        assert_eq!(a.edges().len(), g.edges().len());
    }

    #[test]
    fn viability_examples() {
        let r = check_viability(&path(3).unwrap());
        assert!(r.viable);
        let r = check_viability(&star(3, 2).unwrap());
        assert!(r.viable, "{}", r.to_text());
        assert_eq!(r.per_party.len(), 3);

        let g = randomize_weights(&path(3).unwrap(), 11);
        let r = check_viability(&g);
        assert!(r.viable);
        let (w02, w12) = (g.weight(0, 2).re, g.weight(1, 2).re);
        let norm = (1.0 / (w02 * w02) + 1.0 / (w12 * w12)).sqrt();
        let z = r.zero_vector.unwrap();
        assert!(close(&z, &[c(1.0 / w02 / norm, 0.), c(-1.0 / w12 / norm, 0.), zero()], 1e-12));
    }

    #[test]
    fn unviable_reports() {
        // edgeless balanced graph
        let g = build_graph(2, 1, &[], &[0, 1]).unwrap();
        let r = check_viability(&g);
        assert!(!r.viable && !r.connected);
        assert_eq!(r.zero_space_dim, 3);
        // path(5) with the middle vertex as a party: kernel amplitude is
        // nonzero there too, but the lone-centre graph P5 - centre splits
        let g = path(5).unwrap().with_parties(vec![0, 1]).unwrap();
        let r = check_viability(&g);
        assert!(r.all_det_nonzero() == r.kernel_condition());
        let text = r.to_key_values();
        assert!(text.contains("viable="));
    }

    #[test]
    fn reduction_examples() {
        let t = subdivided_tree(2, 2).unwrap().with_parties(vec![]).unwrap();
        let red = reduce_dangling(&t);
        assert_eq!(red.graph.len(), 1);
        assert_eq!(red.log.len(), 6);

        let p5 = path(5).unwrap();
        let red = reduce_dangling(&p5);
        assert!(red.log.is_empty());
        assert_eq!(red.graph, p5);

        let l = path(3).unwrap().with_parties(vec![]).unwrap();
        let red = reduce_dangling(&l);
        assert_eq!(red.graph.len(), 1);
        assert_eq!(red.log, vec![RemovedPair { dangling: 0, neighbor: 2 }]);
        assert_eq!(red.original_ids, vec![1]);
    }

    #[test]
    fn extension_examples() {
        // single vertex + (u in V2, v in V1) = Λ graph
        let single = build_graph(1, 0, &[], &[0]).unwrap();
        let ext = extend_dangling(
            &single,
            &Attachment {
                part_of_u: Part::V2,
                edges: vec![(0, c(1.0, 0.0))],
                self_loop: None,
                pendant_weight: c(1.0, 0.0),
            },
            true,
        )
        .unwrap();
        assert_eq!(ext.graph.adjacency(), path(3).unwrap().adjacency());
        assert_eq!(ext.graph.parties(), &[0, 1]);
        assert_eq!((ext.nullity_before, ext.nullity_after), (1, 1));

        // path(3) -> path(5): hang u on endpoint 1, v on u
        let p3 = path(3).unwrap();
        let ext = extend_dangling(
            &p3,
            &Attachment {
                part_of_u: Part::V2,
                edges: vec![(1, c(1.0, 0.0))],
                self_loop: None,
                pendant_weight: c(1.0, 0.0),
            },
            true,
        )
        .unwrap();
        assert_eq!(ext.nullity_after, 1);
        assert_eq!(ext.graph.len(), 5);
        assert!(check_viability(&ext.graph).viable);

        // symmetric attachment cancels the kernel amplitude
        let err = extend_dangling(
            &p3,
            &Attachment {
                part_of_u: Part::V2,
                edges: vec![(0, c(1.0, 0.0)), (1, c(1.0, 0.0))],
                self_loop: None,
                pendant_weight: c(1.0, 0.0),
            },
            true,
        )
        .unwrap_err();
        assert_eq!(err, Error::PartyUnsupported(2));

        // u in V1 may not touch V1
        let err = extend_dangling(
            &p3,
            &Attachment {
                part_of_u: Part::V1,
                edges: vec![(0, c(1.0, 0.0))],
                self_loop: None,
                pendant_weight: c(1.0, 0.0),
            },
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SemiBipartiteViolation(..)));
    }
}

//! Weighted semi-bipartite graphs and their block-form adjacency matrices.
//!
//! Vertex ids `0..n1` form the part V1 and `n1..n1+n2` form V2, so the
//! adjacency matrix is already laid out as
//!
//! ```text
//!     | 0    B |
//! A = | B^H  C |
//! ```
//!
//! with an identically zero V1 block.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which side of the semi-bipartition a vertex lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    V1,
    V2,
}

/// An undirected weighted edge. `weight` is the matrix entry `A[u][v]`;
/// the mirrored entry is its conjugate. Stored with `u <= v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Complex64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: impl Into<Complex64>) -> Self {
        Edge {
            u,
            v,
            weight: weight.into(),
        }
    }

    /// Same edge with `u <= v`, conjugating the weight when the ends swap.
    fn canonical(self) -> Self {
        if self.u <= self.v {
            self
        } else {
            Edge {
                u: self.v,
                v: self.u,
                weight: self.weight.conj(),
            }
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A validated weighted semi-bipartite graph with a set of parties in V1.
///
/// Edges are kept sorted by `(u, v)` and parties sorted ascending, so two
/// graphs describing the same data compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n1: usize,
    n2: usize,
    edges: Vec<Edge>,
    parties: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl WeightedGraph {
    /// Validates and builds a graph.
    ///
    /// Edges may be given in either orientation. V1-internal edges, loops on
    /// V1, repeated pairs, zero weights and complex self-loops are rejected,
    /// as are parties outside V1 or listed twice.
    pub fn new(n1: usize, n2: usize, edges: Vec<Edge>, parties: Vec<usize>) -> Result<Self> {
        let n = n1 + n2;
        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u >= n {
                return Err(Error::VertexOutOfRange(e.u, n));
            }
            if e.v >= n {
                return Err(Error::VertexOutOfRange(e.v, n));
            }
            if e.u < n1 && e.v < n1 {
                return Err(Error::SemiBipartiteViolation(e.u, e.v));
            }
            if e.weight == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroWeight(e.u, e.v));
            }
            if e.is_loop() && e.weight.im != 0.0 {
                return Err(Error::ComplexSelfLoop(e.u));
            }
            canon.push(e.canonical());
        }
        canon.sort_by_key(|e| (e.u, e.v));
        if let Some(w) = canon.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::DuplicateEdge(w[0].u, w[0].v));
        }

        let mut parties = parties;
        parties.sort_unstable();
        for (i, &p) in parties.iter().enumerate() {
            if p >= n1 {
                return Err(Error::PartyPlacement(p, "parties must lie in V1".into()));
            }
            if i > 0 && parties[i - 1] == p {
                return Err(Error::PartyPlacement(p, "listed more than once".into()));
            }
        }

        Ok(WeightedGraph {
            n1,
            n2,
            edges: canon,
            parties,
            labels: None,
        })
    }

    /// Convenience constructor for real (typically unit) weights.
    pub fn from_real_edges(
        n1: usize,
        n2: usize,
        edges: &[(usize, usize, f64)],
        parties: Vec<usize>,
    ) -> Result<Self> {
        let edges = edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect();
        Self::new(n1, n2, edges, parties)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Replaces the party set, with the same validation as [`WeightedGraph::new`].
    pub fn with_parties(&self, parties: Vec<usize>) -> Result<Self> {
        let mut g = Self::new(self.n1, self.n2, self.edges.clone(), parties)?;
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Same structure with every weight replaced by `f(edge_index, edge)`.
    pub fn map_weights(&self, mut f: impl FnMut(usize, &Edge) -> Complex64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Edge::new(e.u, e.v, f(i, e)))
            .collect();
        let mut g = Self::new(self.n1, self.n2, edges, self.parties.clone())?;
        g.labels = self.labels.clone();
        Ok(g)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn len(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn part(&self, v: usize) -> Part {
        if v < self.n1 {
            Part::V1
        } else {
            Part::V2
        }
    }

    /// `|V1| = |V2| + 1`.
    pub fn is_balanced(&self) -> bool {
        self.n1 == self.n2 + 1
    }

    pub fn is_real(&self) -> bool {
        self.edges.iter().all(|e| e.weight.im == 0.0)
    }

    /// Neighbour lists (self-loops excluded), in ascending order.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Number of non-loop edges incident to `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| !e.is_loop() && (e.u == v || e.v == v))
            .count()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.edges.iter().any(|e| e.is_loop() && e.u == v)
    }

    /// Largest number of nonzero entries in a row of the adjacency matrix.
    pub fn max_row_support(&self) -> usize {
        let mut count = vec![0usize; self.len()];
        for e in &self.edges {
            count[e.u] += 1;
            if !e.is_loop() {
                count[e.v] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Weight of the edge `{u, v}` as seen from `u` (`A[u][v]`), or zero.
    pub fn weight(&self, u: usize, v: usize) -> Complex64 {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        match self.edges.iter().find(|e| e.u == a && e.v == b) {
            Some(e) if u <= v => e.weight,
            Some(e) => e.weight.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Breadth-first hop distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.neighbors();
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Number of connected components; the empty graph has none.
    pub fn component_count(&self) -> usize {
        let adj = self.neighbors();
        let mut seen = vec![false; self.len()];
        let mut components = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        components
    }

    /// True iff the underlying graph is connected. A single vertex is
    /// connected; the empty graph is not.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Removes vertex `p` and its incident edges.
    ///
    /// Survivors keep their part and are renumbered contiguously; the
    /// returned map sends each old id to its new id (`None` for `p`).
    pub fn delete_vertex(&self, p: usize) -> Result<(WeightedGraph, Vec<Option<usize>>)> {
        self.delete_vertices(&[p])
    }

    /// Removes several vertices at once; see [`WeightedGraph::delete_vertex`].
    pub fn delete_vertices(
        &self,
        removed: &[usize],
    ) -> Result<(WeightedGraph, Vec<Option<usize>>)> {
        let n = self.len();
        let mut gone = vec![false; n];
        for &p in removed {
            if p >= n {
                return Err(Error::NoSuchVertex(p));
            }
            gone[p] = true;
        }
        let mut map = vec![None; n];
        let mut next = 0;
        let mut n1 = 0;
        for (old, slot) in map.iter_mut().enumerate() {
            if !gone[old] {
                *slot = Some(next);
                next += 1;
                if old < self.n1 {
                    n1 += 1;
                }
            }
        }
        let n2 = next - n1;
        let edges = self
            .edges
            .iter()
            .filter_map(|e| Some(Edge::new(map[e.u]?, map[e.v]?, e.weight)))
            .collect();
        let parties = self.parties.iter().filter_map(|&p| map[p]).collect();
        let mut g = WeightedGraph::new(n1, n2, edges, parties)?;
        if let Some(labels) = &self.labels {
            let kept = labels
                .iter()
                .enumerate()
                .filter(|(i, _)| !gone[*i])
                .map(|(_, l)| l.clone())
                .collect();
            g.labels = Some(kept);
        }
        Ok((g, map))
    }

    /// Dense hermitian adjacency matrix in V1-first block form.
    pub fn adjacency(&self) -> AdjacencyMatrix {
        let n = self.len();
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for e in &self.edges {
            m[(e.u, e.v)] = e.weight;
            m[(e.v, e.u)] = e.weight.conj();
        }
        AdjacencyMatrix {
            entries: m,
            n1: self.n1,
            n2: self.n2,
        }
    }
}

/// Free-function form of [`WeightedGraph::new`] taking real weights.
pub fn build_graph(
    n1: usize,
    n2: usize,
    edges: &[(usize, usize, f64)],
    parties: &[usize],
) -> Result<WeightedGraph> {
    WeightedGraph::from_real_edges(n1, n2, edges, parties.to_vec())
}

/// Hermitian adjacency matrix together with its block sizes `(n1, n2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    entries: DMatrix<Complex64>,
    n1: usize,
    n2: usize,
}

impl AdjacencyMatrix {
    /// Wraps an arbitrary square matrix. Hermiticity is checked by the
    /// routines that need it, not here.
    pub fn from_matrix(entries: DMatrix<Complex64>, n1: usize) -> Result<Self> {
        if !entries.is_square() || entries.nrows() < n1 {
            return Err(Error::InvalidParameter(format!(
                "matrix of shape {:?} cannot have a V1 block of size {n1}",
                entries.shape()
            )));
        }
        let n2 = entries.nrows() - n1;
        Ok(AdjacencyMatrix { entries, n1, n2 })
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn block_sizes(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Real part, for the common case of real weights.
    pub fn real_part(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Principal submatrix with row and column `p` removed.
    pub fn without(&self, p: usize) -> Result<AdjacencyMatrix> {
        if p >= self.dim() {
            return Err(Error::NoSuchVertex(p));
        }
        let entries = self.entries.clone().remove_row(p).remove_column(p);
        let n1 = if p < self.n1 { self.n1 - 1 } else { self.n1 };
        Ok(AdjacencyMatrix {
            entries,
            n1,
            n2: self.dim() - 1 - n1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda() -> WeightedGraph {
        build_graph(2, 1, &[(0, 2, 1.0), (1, 2, 1.0)], &[0, 1]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lambda_adjacency() {
        let a = lambda().adjacency();
        let expected = DMatrix::from_row_slice(3, 3, &[0., 0., 1., 0., 0., 1., 1., 1., 0.]);
        assert_eq!(a.real_part(), expected);
        assert_eq!(a.block_sizes(), (2, 1));
    }

    #[test]
    fn self_loop_lands_in_c_block() {
        let g = build_graph(2, 1, &[(0, 2, 1.0), (1, 2, 1.0), (2, 2, 0.3)], &[0, 1]).unwrap();
        let a = g.adjacency();
        assert_eq!(a.entries()[(2, 2)], c(0.3, 0.0));
    }

    #[test]
    fn complex_weight_is_mirrored_conjugate() {
        let g = WeightedGraph::new(
            2,
            1,
            vec![Edge::new(0, 2, c(0.0, 1.0)), Edge::new(1, 2, 1.0)],
            vec![0, 1],
        )
        .unwrap();
        let a = g.adjacency();
        assert_eq!(a.entries()[(0, 2)], c(0.0, 1.0));
        assert_eq!(a.entries()[(2, 0)], c(0.0, -1.0));
        // Reversed orientation describes the same edge.
        let h = WeightedGraph::new(
            2,
            1,
            vec![Edge::new(2, 0, c(0.0, -1.0)), Edge::new(1, 2, 1.0)],
            vec![0, 1],
        )
        .unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn single_vertex_is_valid_and_connected() {
        let g = build_graph(1, 0, &[], &[0]).unwrap();
        assert!(g.is_connected());
        assert!(g.is_balanced());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            build_graph(2, 1, &[(0, 1, 1.0)], &[]),
            Err(Error::SemiBipartiteViolation(0, 1))
        );
        assert_eq!(
            build_graph(2, 1, &[(0, 0, 1.0)], &[]),
            Err(Error::SemiBipartiteViolation(0, 0))
        );
        assert_eq!(
            build_graph(2, 1, &[(0, 2, 1.0), (2, 0, 2.0)], &[]),
            Err(Error::DuplicateEdge(0, 2))
        );
        assert_eq!(
            build_graph(2, 1, &[(0, 2, 0.0)], &[]),
            Err(Error::ZeroWeight(0, 2))
        );
        assert!(matches!(
            build_graph(2, 1, &[(0, 2, 1.0)], &[2]),
            Err(Error::PartyPlacement(2, _))
        ));
        assert!(matches!(
            build_graph(2, 1, &[(0, 2, 1.0)], &[0, 0]),
            Err(Error::PartyPlacement(0, _))
        ));
        assert_eq!(
            build_graph(2, 1, &[(0, 3, 1.0)], &[]),
            Err(Error::VertexOutOfRange(3, 3))
        );
        assert_eq!(
            WeightedGraph::new(1, 1, vec![Edge::new(1, 1, c(1.0, 1.0))], vec![]),
            Err(Error::ComplexSelfLoop(1))
        );
    }

    #[test]
    fn delete_vertex_from_lambda() {
        let (g, map) = lambda().delete_vertex(0).unwrap();
        assert_eq!(map, vec![None, Some(0), Some(1)]);
        assert_eq!((g.n1(), g.n2()), (1, 1));
        assert_eq!(g.edges(), &[Edge::new(0, 1, 1.0)]);
        assert_eq!(g.parties(), &[0]);
    }

    #[test]
    fn delete_path_endpoint_gives_shorter_path() {
        // P5 in V1-first order: V1 = {0,1,2}, V2 = {3,4}; path 0-3-1-4-2.
        let p5 = build_graph(
            3,
            2,
            &[(0, 3, 1.0), (1, 3, 1.0), (1, 4, 1.0), (2, 4, 1.0)],
            &[0, 2],
        )
        .unwrap();
        let (p4, _) = p5.delete_vertex(0).unwrap();
        assert_eq!(p4.len(), 4);
        assert_eq!(p4.edges().len(), 3);
        assert!(p4.is_connected());
        assert!((0..4).all(|v| p4.degree(v) <= 2));
    }

    #[test]
    fn delete_last_vertex_gives_empty_graph() {
        let g = build_graph(1, 0, &[], &[0]).unwrap();
        let (e, _) = g.delete_vertex(0).unwrap();
        assert!(e.is_empty());
        assert!(!e.is_connected());
        assert_eq!(g.delete_vertex(1).unwrap_err(), Error::NoSuchVertex(1));
    }

    #[test]
    fn connectivity() {
        assert!(lambda().is_connected());
        let two = build_graph(2, 2, &[(0, 2, 1.0), (1, 3, 1.0)], &[]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(two.component_count(), 2);
        let empty = build_graph(0, 0, &[], &[]).unwrap();
        assert!(!empty.is_connected());
    }

    #[test]
    fn deletion_matches_principal_submatrix() {
        let g = build_graph(
            3,
            2,
            &[(0, 3, 1.0), (1, 3, 0.5), (1, 4, 2.0), (2, 4, 1.5), (3, 4, 0.7)],
            &[0, 2],
        )
        .unwrap();
        for p in 0..g.len() {
            let (h, _) = g.delete_vertex(p).unwrap();
            assert_eq!(h.adjacency(), g.adjacency().without(p).unwrap());
        }
    }
}

//! Spectra, the gap around the zero eigenvalue, and two lower bounds on it.
//!
//! The interlacing bound uses that deleting one vertex gives eigenvalues
//! `μ` with `λ_i ≤ μ_i ≤ λ_{i+1}`, so when `A_G` has a simple zero the
//! nonzero eigenvalue closest to it is at least `min |μ|` away. The
//! determinant bound divides `|det|` by the largest possible eigenvalue
//! magnitude to the power `order - 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg;
use crate::matching::hopcroft_karp;
use crate::rng::{self, Domain};
use crate::viability::{det_without, ZERO_TOL};

/// Ascending real spectrum of a hermitian matrix.
pub fn spectrum(matrix: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    linalg::eigvalsh(matrix)
}

fn zero_threshold(values: &[f64], tolerance: f64) -> f64 {
    tolerance * linalg::spectral_norm_of(values).max(1.0)
}

/// Smallest `|λ|` among eigenvalues not classified as zero, or `None` when
/// every eigenvalue is zero. No nullity requirement.
pub fn min_nonzero_abs(values: &[f64], tolerance: f64) -> Option<f64> {
    let cut = zero_threshold(values, tolerance);
    values
        .iter()
        .map(|x| x.abs())
        .filter(|&x| x >= cut)
        .min_by(f64::total_cmp)
}

/// The gap `ΔE` between the (simple) zero eigenvalue and its nearest
/// neighbour in the spectrum.
pub fn gap_around_zero(matrix: &DMatrix<Complex64>, tolerance: f64) -> Result<f64> {
    let values = spectrum(matrix)?;
    gap_of_spectrum(&values, tolerance)
}

pub fn gap_of_spectrum(values: &[f64], tolerance: f64) -> Result<f64> {
    let cut = zero_threshold(values, tolerance);
    let zeros = values.iter().filter(|x| x.abs() < cut).count();
    if zeros != 1 {
        return Err(Error::DegenerateKernel(zeros));
    }
    min_nonzero_abs(values, tolerance).ok_or(Error::DegenerateKernel(zeros))
}

/// Largest violation of `λ_i ≤ μ_i ≤ λ_{i+1}`, where `λ` (length n) and `μ`
/// (length n-1) are ascending. Zero when the chain holds exactly.
pub fn interlacing_violation(lambda: &[f64], mu: &[f64]) -> f64 {
    assert_eq!(lambda.len(), mu.len() + 1, "μ must have one fewer eigenvalue");
    mu.iter()
        .enumerate()
        .map(|(i, &m)| (lambda[i] - m).max(m - lambda[i + 1]).max(0.0))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingBound {
    /// `max_p min |μ(A_{G-p})|`.
    pub value: f64,
    /// Party attaining the maximum.
    pub party: usize,
    /// `min |μ|` for each party, in party order.
    pub per_party: Vec<f64>,
    /// Largest interlacing violation over all parties, relative to `‖A‖₂`.
    pub worst_violation: f64,
}

impl InterlacingBound {
    pub fn chain_holds(&self, tolerance: f64) -> bool {
        self.worst_violation <= tolerance
    }
}

pub fn interlacing_gap_bound(graph: &WeightedGraph) -> Result<InterlacingBound> {
    if graph.parties().is_empty() {
        return Err(Error::InvalidParameter("graph has no parties".into()));
    }
    let adj = graph.adjacency();
    let lambda = spectrum(adj.entries())?;
    let cut = zero_threshold(&lambda, ZERO_TOL);
    let zeros = lambda.iter().filter(|x| x.abs() < cut).count();
    if zeros != 1 {
        return Err(Error::DegenerateKernel(zeros));
    }
    let scale = linalg::spectral_norm_of(&lambda).max(f64::MIN_POSITIVE);

    let mut per_party = Vec::with_capacity(graph.parties().len());
    let mut worst: f64 = 0.0;
    for &p in graph.parties() {
        let mu = spectrum(adj.without(p)?.entries())?;
        worst = worst.max(interlacing_violation(&lambda, &mu) / scale);
        per_party.push(mu.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min));
    }
    let (best, &value) = per_party
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("parties are nonempty");
    Ok(InterlacingBound {
        value,
        party: graph.parties()[best],
        per_party,
        worst_violation: worst,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetBound {
    pub party: usize,
    pub det_abs: f64,
    /// Largest number of nonzero entries in a row of `A_{G-p}`.
    pub d_max: usize,
    pub bound: f64,
    /// The true smallest `|μ|` of `A_{G-p}`, for comparison.
    pub min_abs_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetBounds {
    pub per_party: Vec<DetBound>,
    /// False when some weight exceeds 1 in magnitude, in which case the
    /// bound is not guaranteed.
    pub weights_bounded: bool,
}

/// `|det(A_{G-p})| / d_max(G-p)^(order-1)` for each party.
pub fn det_eigen_lower_bound(graph: &WeightedGraph) -> Result<DetBounds> {
    let weights_bounded = graph.edges().iter().all(|e| e.weight.norm() <= 1.0);
    let adj = graph.adjacency();
    let mut per_party = Vec::with_capacity(graph.parties().len());
    for &p in graph.parties() {
        let det_abs = det_without(graph, p)?.norm();
        let (sub, _) = graph.delete_vertex(p)?;
        let order = sub.len();
        let d_max = sub.max_row_support();
        let bound = match (order, d_max) {
            (0, _) => 1.0,
            (_, 0) => 0.0,
            _ => det_abs / (d_max as f64).powi(order as i32 - 1),
        };
        let mu = spectrum(adj.without(p)?.entries())?;
        let min_abs_eigenvalue = mu.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        per_party.push(DetBound {
            party: p,
            det_abs,
            d_max,
            bound,
            min_abs_eigenvalue,
        });
    }
    Ok(DetBounds {
        per_party,
        weights_bounded,
    })
}

/// Empirical check of the determinant tail bound: with all edge weights
/// uniform on `[0, 1]` and a perfect matching of size `ℓ`,
/// `P(|det A| > 2^-(3ℓ-1)) ≥ 2^-ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloRecord {
    pub ell: usize,
    pub threshold: f64,
    pub trials: usize,
    pub successes: usize,
    pub probability: f64,
    /// The guaranteed lower bound `2^-ℓ`.
    pub bound: f64,
    /// Binomial standard error at the bound.
    pub sigma: f64,
    /// Empirical CDF of `|det|` at the deciles: `(q, value)`.
    pub deciles: Vec<(f64, f64)>,
}

impl MonteCarloRecord {
    /// Whether the observed probability clears the bound with 3σ slack.
    pub fn holds(&self) -> bool {
        self.probability >= self.bound - 3.0 * self.sigma
    }
}

/// Size of a perfect V1–V2 matching of the whole graph, if there is one.
fn perfect_matching_size(graph: &WeightedGraph) -> Option<usize> {
    if graph.n1() != graph.n2() {
        return None;
    }
    let n1 = graph.n1();
    let mut adj = vec![Vec::new(); n1];
    for e in graph.edges() {
        if e.u < n1 && e.v >= n1 {
            adj[e.u].push(e.v - n1);
        }
    }
    let size = hopcroft_karp(&adj, graph.n2()).iter().flatten().count();
    (size == n1).then_some(n1)
}

pub fn det_bound_montecarlo(
    graph: &WeightedGraph,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloRecord> {
    let ell = perfect_matching_size(graph).ok_or(Error::NoMatching)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let threshold = 0.5f64.powi(3 * ell as i32 - 1);
    let bound = 0.5f64.powi(ell as i32);

    let mut dets: Vec<f64> = (0..trials)
        .map(|t| {
            let mut r = rng::stream(Domain::DeterminantTrial, seed, t as u64);
            let g = graph
                .map_weights(|_, _| {
                    // (0, 1]: a zero draw would be an invalid edge
                    Complex64::new(1.0 - r.random::<f64>(), 0.0)
                })
                .expect("positive weights keep the graph valid");
            linalg::determinant(g.adjacency().entries()).norm()
        })
        .collect();
    let successes = dets.iter().filter(|&&d| d > threshold).count();
    dets.sort_by(f64::total_cmp);
    let deciles = (1..10)
        .map(|k| {
            let q = k as f64 / 10.0;
            let idx = ((q * trials as f64) as usize).min(trials - 1);
            (q, dets[idx])
        })
        .collect();
    Ok(MonteCarloRecord {
        ell,
        threshold,
        trials,
        successes,
        probability: successes as f64 / trials as f64,
        bound,
        sigma: (bound * (1.0 - bound) / trials as f64).sqrt(),
        deciles,
    })
}

/// Everything the spectral module says about one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub zero_index: Option<usize>,
    pub gap: Option<f64>,
    pub det_bound: Option<DetBounds>,
    pub interlacing_bound: Option<InterlacingBound>,
}

impl SpectralReport {
    pub fn compute(graph: &WeightedGraph) -> Result<Self> {
        let eigenvalues = spectrum(graph.adjacency().entries())?;
        let cut = zero_threshold(&eigenvalues, ZERO_TOL);
        let zeros: Vec<usize> = (0..eigenvalues.len())
            .filter(|&i| eigenvalues[i].abs() < cut)
            .collect();
        let simple = zeros.len() == 1;
        let gap = if simple {
            gap_of_spectrum(&eigenvalues, ZERO_TOL).ok()
        } else {
            None
        };
        let has_parties = !graph.parties().is_empty();
        Ok(SpectralReport {
            zero_index: simple.then(|| zeros[0]),
            gap,
            det_bound: has_parties
                .then(|| det_eigen_lower_bound(graph).ok())
                .flatten(),
            interlacing_bound: (simple && has_parties)
                .then(|| interlacing_gap_bound(graph).ok())
                .flatten(),
            eigenvalues,
        })
    }
}

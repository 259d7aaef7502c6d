//! Time-dependent controls, the controlled Hamiltonian `F(t) A F(t)*`, and
//! its numerical propagation.
//!
//! Each V1 vertex `v` carries a real control `f_v(t)` that scales every
//! coupling incident to `v`; V2 vertices are uncontrolled. If `A z = 0`
//! then `H(t) F(t)⁻¹ z = 0`, so the dark state `F⁻¹ z` stays on V1 and
//! slides from the sender (`f_a(0) = 0`) to the receiver (`f_b(T) = 0`).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg;
use crate::spectral::min_nonzero_abs;
use crate::viability::{check_viability, zero_eigenvector, SUPPORT_TOL, ZERO_TOL};

/// Default integrator resolution.
pub const STEPS_PER_UNIT_TIME: f64 = 20.0;

/// Unitarity defect above which a run is rejected.
pub const UNSTABLE_DEFECT: f64 = 1e-6;

/// Number of uniformly spaced times at which schedules are validated.
const VALIDATION_SAMPLES: usize = 1000;

/// A control profile on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `t / T`
    RampUp,
    /// `1 - t / T`
    RampDown,
    /// `c`, multiplied by the schedule's straddle factor.
    Constant(f64),
    /// `min(2t/T, 1)`
    SequentialUp,
    /// `max(0, min(1 - 2t/T, 1))`: falls to zero at `T/2` and stays there.
    SequentialDown,
    /// Piecewise-linear through `(t, value)` samples, which must start at 0,
    /// end at `T` and be strictly increasing in `t`.
    Tabulated(Vec<(f64, f64)>),
}

impl Shape {
    fn raw(&self, t: f64, total: f64) -> f64 {
        let x = t / total;
        match self {
            Shape::RampUp => x,
            Shape::RampDown => 1.0 - x,
            Shape::Constant(c) => *c,
            Shape::SequentialUp => (2.0 * x).min(1.0),
            Shape::SequentialDown => (1.0 - 2.0 * x).clamp(0.0, 1.0),
            Shape::Tabulated(samples) => interpolate(samples, t),
        }
    }

    /// Closed intervals on which the shape vanishes.
    fn zero_set(&self, total: f64) -> Vec<(f64, f64)> {
        match self {
            Shape::RampUp | Shape::SequentialUp => vec![(0.0, 0.0)],
            Shape::RampDown => vec![(total, total)],
            Shape::Constant(c) if *c == 0.0 => vec![(0.0, total)],
            Shape::Constant(_) => vec![],
            Shape::SequentialDown => vec![(total / 2.0, total)],
            Shape::Tabulated(samples) => tabulated_zero_set(samples),
        }
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let i = samples.partition_point(|&(s, _)| s <= t);
    if i == 0 {
        return samples[0].1;
    }
    if i == samples.len() {
        return samples[i - 1].1;
    }
    let (t0, y0) = samples[i - 1];
    let (t1, y1) = samples[i];
    y0 + (y1 - y0) * (t - t0) / (t1 - t0)
}

fn tabulated_zero_set(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (i, &(t, y)) in samples.iter().enumerate() {
        if y == 0.0 {
            out.push((t, t));
        }
        if let Some(&(t1, y1)) = samples.get(i + 1) {
            if y == 0.0 && y1 == 0.0 {
                out.push((t, t1));
            } else if y * y1 < 0.0 {
                let c = t + (t1 - t) * y / (y - y1);
                out.push((c, c));
            }
        }
    }
    out
}

fn intervals_meet(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    a.iter()
        .any(|&(a0, a1)| b.iter().any(|&(b0, b1)| a0 <= b1 && b0 <= a1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    total_time: f64,
    controls: Vec<Shape>,
    straddle: f64,
    sender: usize,
    receiver: usize,
}

impl ControlSchedule {
    /// One shape per V1 vertex. Validates the endpoint conditions, that
    /// non-party controls never vanish, and that no two controls vanish at
    /// the same time.
    pub fn new(
        graph: &WeightedGraph,
        total_time: f64,
        controls: Vec<Shape>,
        straddle: f64,
        sender: usize,
        receiver: usize,
    ) -> Result<Self> {
        if sender == receiver {
            return Err(Error::SameEndpoints(sender));
        }
        for x in [sender, receiver] {
            if !graph.parties().contains(&x) {
                return Err(Error::PartyPlacement(x, "endpoint is not a party".into()));
            }
        }
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total time must be positive, got {total_time}"
            )));
        }
        if !(straddle.is_finite() && straddle >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "straddle must be nonnegative, got {straddle}"
            )));
        }
        if controls.len() != graph.n1() {
            return Err(Error::InvalidSchedule(format!(
                "{} controls for {} V1 vertices",
                controls.len(),
                graph.n1()
            )));
        }
        let schedule = ControlSchedule {
            total_time,
            controls,
            straddle,
            sender,
            receiver,
        };
        schedule.validate(graph.parties())?;
        Ok(schedule)
    }

    fn validate(&self, parties: &[usize]) -> Result<()> {
        let total = self.total_time;
        for (v, shape) in self.controls.iter().enumerate() {
            if let Shape::Tabulated(s) = shape {
                let ordered = s.windows(2).all(|w| w[0].0 < w[1].0);
                let covers = s.first().is_some_and(|p| p.0 == 0.0)
                    && s.last().is_some_and(|p| (p.0 - total).abs() <= 1e-12 * total);
                if !ordered || !covers || s.iter().any(|p| !p.1.is_finite()) {
                    return Err(Error::InvalidSchedule(format!(
                        "tabulated control of vertex {v} must be finite, increasing in t and span [0, T]"
                    )));
                }
            }
        }
        if self.value(self.sender, 0.0).abs() > 1e-12 {
            return Err(Error::InvalidSchedule("sender control must vanish at t = 0".into()));
        }
        if self.value(self.receiver, total).abs() > 1e-12 {
            return Err(Error::InvalidSchedule("receiver control must vanish at t = T".into()));
        }

        let zero_sets: Vec<Vec<(f64, f64)>> = (0..self.controls.len())
            .map(|v| self.zero_set(v))
            .collect();
        for (v, zs) in zero_sets.iter().enumerate() {
            if !parties.contains(&v) && !zs.is_empty() {
                return Err(Error::InvalidSchedule(format!(
                    "control of non-party vertex {v} vanishes"
                )));
            }
            for (w, other) in zero_sets.iter().enumerate().skip(v + 1) {
                if intervals_meet(zs, other) {
                    return Err(Error::InvalidSchedule(format!(
                        "controls of vertices {v} and {w} vanish simultaneously"
                    )));
                }
            }
        }
        for k in 0..=VALIDATION_SAMPLES {
            let t = total * k as f64 / VALIDATION_SAMPLES as f64;
            let zeros = (0..self.controls.len())
                .filter(|&v| self.value(v, t) == 0.0)
                .count();
            if zeros > 1 {
                return Err(Error::InvalidSchedule(format!(
                    "{zeros} controls vanish at t = {t}"
                )));
            }
        }
        Ok(())
    }

    fn zero_set(&self, v: usize) -> Vec<(f64, f64)> {
        match self.controls[v] {
            Shape::Constant(c) if c * self.straddle == 0.0 => vec![(0.0, self.total_time)],
            _ => self.controls[v].zero_set(self.total_time),
        }
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn straddle(&self) -> f64 {
        self.straddle
    }

    pub fn sender(&self) -> usize {
        self.sender
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.controls
    }

    /// `f_v(t)`.
    pub fn value(&self, v: usize, t: f64) -> f64 {
        let raw = self.controls[v].raw(t, self.total_time);
        match self.controls[v] {
            Shape::Constant(_) => raw * self.straddle,
            _ => raw,
        }
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        (0..self.controls.len()).map(|v| self.value(v, t)).collect()
    }
}

/// `f_a = t/T`, `f_b = 1 - t/T`, every other V1 control constant `s`.
pub fn default_schedule(
    graph: &WeightedGraph,
    a: usize,
    b: usize,
    total_time: f64,
    straddle: f64,
) -> Result<ControlSchedule> {
    if a == b {
        return Err(Error::SameEndpoints(a));
    }
    let controls = (0..graph.n1())
        .map(|v| match v {
            _ if v == a => Shape::RampUp,
            _ if v == b => Shape::RampDown,
            _ => Shape::Constant(1.0),
        })
        .collect();
    ControlSchedule::new(graph, total_time, controls, straddle, a, b)
}

/// `f_a = min(2t/T, 1)` and `f_b = max(0, min(1 - 2t/T, 1))`, other V1
/// controls constant 1: first the sender side is switched on, then the
/// receiver side off.
pub fn sequential_schedule(
    graph: &WeightedGraph,
    a: usize,
    b: usize,
    total_time: f64,
) -> Result<ControlSchedule> {
    if a == b {
        return Err(Error::SameEndpoints(a));
    }
    let controls = (0..graph.n1())
        .map(|v| match v {
            _ if v == a => Shape::SequentialUp,
            _ if v == b => Shape::SequentialDown,
            _ => Shape::Constant(1.0),
        })
        .collect();
    ControlSchedule::new(graph, total_time, controls, 1.0, a, b)
}

/// A graph together with a schedule, with the static kernel of `A_G`
/// cached.
#[derive(Debug, Clone)]
pub struct Protocol {
    graph: WeightedGraph,
    adjacency: DMatrix<Complex64>,
    schedule: ControlSchedule,
    kernel: Option<DVector<Complex64>>,
    viable: bool,
}

impl Protocol {
    pub fn new(graph: &WeightedGraph, schedule: ControlSchedule) -> Result<Self> {
        if schedule.controls.len() != graph.n1() {
            return Err(Error::InvalidSchedule("schedule built for another graph".into()));
        }
        let adj = graph.adjacency();
        let kernel = zero_eigenvector(&adj, ZERO_TOL).ok().map(|z| z.vector);
        Ok(Protocol {
            viable: check_viability(graph).viable,
            graph: graph.clone(),
            adjacency: adj.into_entries(),
            schedule,
            kernel,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn schedule(&self) -> &ControlSchedule {
        &self.schedule
    }

    pub fn viable(&self) -> bool {
        self.viable
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let total = self.schedule.total_time;
        if !(0.0..=total).contains(&t) {
            return Err(Error::TimeOutOfRange { t, total });
        }
        Ok(())
    }

    /// Diagonal of `F(t)`: V1 controls, then ones.
    fn scaling(&self, t: f64) -> Vec<f64> {
        let mut f = self.schedule.values(t);
        f.resize(self.graph.len(), 1.0);
        f
    }

    /// `H(t) = F(t) A F(t)*`.
    pub fn hamiltonian_at(&self, t: f64) -> Result<DMatrix<Complex64>> {
        self.check_time(t)?;
        Ok(self.hamiltonian_unchecked(t))
    }

    fn hamiltonian_unchecked(&self, t: f64) -> DMatrix<Complex64> {
        let f = self.scaling(t);
        let n = f.len();
        DMatrix::from_fn(n, n, |i, j| self.adjacency[(i, j)] * (f[i] * f[j]))
    }

    /// Unit zero-energy eigenvector of `H(t)`, `∝ F(t)⁻¹ z`. Where a single
    /// control vanishes the state is the localised limit on that vertex
    /// (in particular the sender at `t = 0` and the receiver at `t = T`).
    pub fn dark_state_at(&self, t: f64) -> Result<DVector<Complex64>> {
        self.check_time(t)?;
        self.dark_state_unchecked(t)
    }

    fn dark_state_unchecked(&self, t: f64) -> Result<DVector<Complex64>> {
        let z = self.kernel.as_ref().ok_or_else(|| {
            Error::DegenerateKernel(
                crate::viability::nullity(&self.adjacency, ZERO_TOL).unwrap_or(0),
            )
        })?;
        let n = z.len();
        let localized = |v: usize| -> Result<DVector<Complex64>> {
            if z[v].norm() <= SUPPORT_TOL {
                return Err(Error::DarkStateUndefined(t));
            }
            let mut e = DVector::from_element(n, Complex64::new(0.0, 0.0));
            e[v] = z[v] / z[v].norm();
            Ok(e)
        };
        if t == 0.0 {
            return localized(self.schedule.sender);
        }
        if t == self.schedule.total_time {
            return localized(self.schedule.receiver);
        }
        let f = self.scaling(t);
        let zeros: Vec<usize> = (0..self.graph.n1()).filter(|&v| f[v] == 0.0).collect();
        match zeros.as_slice() {
            [] => {
                let mut v = DVector::from_fn(n, |i, _| z[i] / f[i]);
                let len = linalg::norm(&v);
                v /= Complex64::new(len, 0.0);
                Ok(v)
            }
            [v] => localized(*v),
            _ => Err(Error::DarkStateUndefined(t)),
        }
    }
}

/// One sampled time of a traced run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub populations: Vec<f64>,
    /// Smallest nonzero `|λ|` of `H(t)`, if any.
    pub gap: Option<f64>,
    pub controls: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferResult {
    pub final_state: DVector<Complex64>,
    /// `1 - |⟨b|U_T|a⟩|`
    pub error: f64,
    /// `arg ⟨b|U_T|a⟩`
    pub acquired_phase: f64,
    pub predicted_phase: Option<f64>,
    pub v2_population_max: f64,
    /// `max |(U_T* U_T - I)_ij|`
    pub unitarity_defect: f64,
    /// Largest `‖H(t) z(t)‖ / ‖H(t)‖` over the step midpoints.
    pub dark_state_residual: f64,
    pub viable: bool,
    pub trace: Option<Vec<TraceRow>>,
}

/// Propagates `|a⟩` through `steps` equal steps, each the exact exponential
/// of the Hamiltonian at the step midpoint.
pub fn evolve(protocol: &Protocol, steps: usize) -> Result<TransferResult> {
    run(protocol, steps, false)
}

/// As [`evolve`], also recording populations, controls and the gap at the
/// start of each step and at `T`.
pub fn evolve_traced(protocol: &Protocol, steps: usize) -> Result<TransferResult> {
    run(protocol, steps, true)
}

/// Full propagator, split into real and imaginary parts so that real
/// Hamiltonians only need real matrix products.
struct Propagator {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl Propagator {
    fn identity(n: usize) -> Self {
        Propagator {
            re: DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    /// `U ← Q diag(e^{-iλΔ}) Qᵀ U` for real orthogonal `Q`.
    fn apply_real(&mut self, q: &DMatrix<f64>, values: &[f64], dt: f64) {
        let mut wr = q.tr_mul(&self.re);
        let mut wi = q.tr_mul(&self.im);
        for (k, &lam) in values.iter().enumerate() {
            let (s, c) = (lam * dt).sin_cos();
            let mut rr = wr.row_mut(k);
            let mut ri = wi.row_mut(k);
            for j in 0..rr.len() {
                let (x, y) = (rr[j], ri[j]);
                rr[j] = c * x + s * y;
                ri[j] = c * y - s * x;
            }
        }
        self.re = q * wr;
        self.im = q * wi;
    }

    /// `U ← Q diag(e^{-iλΔ}) Q* U` for unitary `Q`.
    fn apply_complex(&mut self, q: &DMatrix<Complex64>, values: &[f64], dt: f64) {
        let u = self.to_complex();
        let mut w = q.ad_mul(&u);
        for (k, &lam) in values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -lam * dt);
            for x in w.row_mut(k).iter_mut() {
                *x *= phase;
            }
        }
        let u = q * w;
        self.re = u.map(|z| z.re);
        self.im = u.map(|z| z.im);
    }

    fn to_complex(&self) -> DMatrix<Complex64> {
        self.re.zip_map(&self.im, Complex64::new)
    }

    fn column(&self, a: usize) -> DVector<Complex64> {
        DVector::from_fn(self.re.nrows(), |i, _| {
            Complex64::new(self.re[(i, a)], self.im[(i, a)])
        })
    }

    fn unitarity_defect(&self) -> f64 {
        let u = self.to_complex();
        let g = u.ad_mul(&u);
        let n = g.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }
}

fn run(protocol: &Protocol, steps: usize, traced: bool) -> Result<TransferResult> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let graph = &protocol.graph;
    let n = graph.len();
    let n1 = graph.n1();
    let total = protocol.schedule.total_time;
    let (a, b) = (protocol.schedule.sender, protocol.schedule.receiver);
    let dt = total / steps as f64;
    let real = graph.is_real();

    let mut u = Propagator::identity(n);
    let mut v2_max: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut trace = traced.then(Vec::new);

    let record = |trace: &mut Option<Vec<TraceRow>>, t: f64, psi: &DVector<Complex64>| -> Result<()> {
        if let Some(rows) = trace {
            let h = protocol.hamiltonian_unchecked(t);
            let values = linalg::eigvalsh(&h)?;
            rows.push(TraceRow {
                t,
                populations: psi.iter().map(|z| z.norm_sqr()).collect(),
                gap: min_nonzero_abs(&values, ZERO_TOL),
                controls: protocol.schedule.values(t),
            });
        }
        Ok(())
    };
    record(&mut trace, 0.0, &u.column(a))?;

    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) * dt;
        let h = protocol.hamiltonian_unchecked(t_mid);
        let norm = if real {
            let (values, q) = linalg::eigh_real(&h.map(|z| z.re));
            u.apply_real(&q, &values, dt);
            linalg::spectral_norm_of(&values)
        } else {
            let (values, q) = linalg::eigh(&h)?;
            u.apply_complex(&q, &values, dt);
            linalg::spectral_norm_of(&values)
        };

        if let Ok(z) = protocol.dark_state_unchecked(t_mid) {
            if norm > 0.0 {
                residual = residual.max(linalg::norm(&(&h * z)) / norm);
            }
        }

        let psi = u.column(a);
        let v2: f64 = psi.rows(n1, n - n1).iter().map(|z| z.norm_sqr()).sum();
        v2_max = v2_max.max(v2);
        let t_end = if k + 1 == steps { total } else { (k + 1) as f64 * dt };
        record(&mut trace, t_end, &psi)?;
    }

    let unitarity_defect = u.unitarity_defect();
    // written this way so a NaN defect also counts as unstable
    if unitarity_defect.is_nan() || unitarity_defect > UNSTABLE_DEFECT {
        return Err(Error::IntegrationUnstable(unitarity_defect));
    }
    let final_state = u.column(a);
    let amp = final_state[b];
    let predicted_phase = protocol.kernel.as_ref().and_then(|z| phase_of(z, a, b).ok());

    Ok(TransferResult {
        error: (1.0 - amp.norm()).clamp(0.0, 1.0),
        acquired_phase: amp.arg(),
        predicted_phase,
        v2_population_max: v2_max.clamp(0.0, 1.0),
        unitarity_defect,
        dark_state_residual: residual,
        viable: protocol.viable,
        trace,
        final_state,
    })
}

fn phase_of(z: &DVector<Complex64>, a: usize, b: usize) -> Result<f64> {
    for p in [a, b] {
        if z[p].norm() <= SUPPORT_TOL {
            return Err(Error::PartyUnsupported(p));
        }
    }
    Ok((z[b] * z[a].conj()).arg())
}

/// Phase picked up moving from `a` to `b` along the dark state:
/// `arg(z_b z̄_a)`, which for real weights equals `arg(z_a / z_b)`.
pub fn transfer_phase_prediction(graph: &WeightedGraph, a: usize, b: usize) -> Result<f64> {
    for p in [a, b] {
        if p >= graph.len() {
            return Err(Error::NoSuchVertex(p));
        }
    }
    let z = zero_eigenvector(&graph.adjacency(), ZERO_TOL)?.vector;
    phase_of(&z, a, b)
}

/// Difference of two angles folded into `[0, π]`.
pub fn phase_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TStarSearch {
    pub threshold: f64,
    pub straddle: f64,
    pub steps_per_unit_time: f64,
    /// Largest total time probed before giving up.
    pub cap: f64,
}

impl Default for TStarSearch {
    fn default() -> Self {
        TStarSearch {
            threshold: 0.05,
            straddle: 1.0,
            steps_per_unit_time: STEPS_PER_UNIT_TIME,
            cap: 1e5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TStar {
    pub tstar: f64,
    /// Transfer error at `tstar`.
    pub error: f64,
    /// Every `(T, error)` probed, in probe order.
    pub probes: Vec<(f64, f64)>,
    /// Worst unitarity defect and dark-state residual over all probes.
    pub max_unitarity_defect: f64,
    pub max_dark_state_residual: f64,
}

pub fn steps_for(total_time: f64, steps_per_unit_time: f64) -> usize {
    ((total_time * steps_per_unit_time).ceil() as usize).max(1)
}

/// Smallest `T` with transfer error below the threshold, to 1% relative
/// resolution. `T` doubles from 1 until two consecutive probes pass, then
/// the bracket between the last failure and the first of those passes is
/// bisected.
pub fn find_tstar(graph: &WeightedGraph, a: usize, b: usize, search: &TStarSearch) -> Result<TStar> {
    if !(search.threshold > 0.0 && search.threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold must lie in (0, 1], got {}",
            search.threshold
        )));
    }
    let mut probes = Vec::new();
    let mut defect: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut probe = |t: f64| -> Result<f64> {
        let schedule = default_schedule(graph, a, b, t, search.straddle)?;
        let protocol = Protocol::new(graph, schedule)?;
        let r = evolve(&protocol, steps_for(t, search.steps_per_unit_time))?;
        defect = defect.max(r.unitarity_defect);
        residual = residual.max(r.dark_state_residual);
        probes.push((t, r.error));
        Ok(r.error)
    };

    let mut t = 1.0;
    let mut last_fail: Option<f64> = None;
    let mut first_pass: Option<(f64, f64)> = None;
    loop {
        if t > search.cap {
            return Err(Error::TStarNotFound {
                threshold: search.threshold,
                cap: search.cap,
            });
        }
        let e = probe(t)?;
        if e < search.threshold {
            if first_pass.is_some() {
                break;
            }
            first_pass = Some((t, e));
        } else {
            last_fail = Some(t);
            first_pass = None;
        }
        t *= 2.0;
    }

    let (mut hi, mut hi_err) = first_pass.expect("loop exits on a second pass");
    if let Some(mut lo) = last_fail {
        while (hi - lo) / hi > 0.01 {
            let mid = 0.5 * (lo + hi);
            let e = probe(mid)?;
            if e < search.threshold {
                hi = mid;
                hi_err = e;
            } else {
                lo = mid;
            }
        }
    }
    Ok(TStar {
        tstar: hi,
        error: hi_err,
        probes,
        max_unitarity_defect: defect,
        max_dark_state_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path;
    use crate::graph::{build_graph, Edge};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lambda_protocol(t: f64) -> Protocol {
        let g = path(3).unwrap();
        Protocol::new(&g, default_schedule(&g, 0, 1, t, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn schedule_endpoints() {
        let g = path(3).unwrap();
        let s = default_schedule(&g, 0, 1, 10.0, 1.0).unwrap();
        assert_eq!(s.values(0.0), vec![0.0, 1.0]);
        assert_eq!(s.values(10.0), vec![1.0, 0.0]);
        assert_eq!(s.values(5.0), vec![0.5, 0.5]);
        assert_eq!(default_schedule(&g, 0, 0, 10.0, 1.0), Err(Error::SameEndpoints(0)));
    }

    #[test]
    fn sequential_values() {
        let g = path(3).unwrap();
        let s = sequential_schedule(&g, 0, 1, 8.0).unwrap();
        assert_eq!(s.values(0.0), vec![0.0, 1.0]);
        assert_eq!(s.values(8.0), vec![1.0, 0.0]);
        assert_eq!(s.value(0, 2.0), 0.5);
        assert_eq!(s.value(1, 2.0), 0.5);
        assert_eq!(s.value(1, 6.0), 0.0);
    }

    #[test]
    fn straddle_scales_constants_only() {
        let g = path(5).unwrap();
        let s = default_schedule(&g, 0, 2, 4.0, 10.0).unwrap();
        assert_eq!(s.values(1.0), vec![0.25, 10.0, 0.75]);
    }

    #[test]
    fn invalid_schedules() {
        let g = path(5).unwrap();
        // non-party control vanishing
        let err = ControlSchedule::new(
            &g,
            1.0,
            vec![Shape::RampUp, Shape::Constant(0.0), Shape::RampDown],
            1.0,
            0,
            2,
        );
        assert!(matches!(err, Err(Error::InvalidSchedule(_))));
        // sender and receiver both zero at t = 0
        let err = ControlSchedule::new(
            &g,
            1.0,
            vec![Shape::RampUp, Shape::Constant(1.0), Shape::Tabulated(vec![(0.0, 0.0), (1.0, 0.0)])],
            1.0,
            0,
            2,
        );
        assert!(matches!(err, Err(Error::InvalidSchedule(_))));
        // sender not starting at zero
        let err = ControlSchedule::new(
            &g,
            1.0,
            vec![Shape::RampDown, Shape::Constant(1.0), Shape::RampDown],
            1.0,
            0,
            2,
        );
        assert!(matches!(err, Err(Error::InvalidSchedule(_))));
        // tabulated control that is fine
        ControlSchedule::new(
            &g,
            2.0,
            vec![
                Shape::Tabulated(vec![(0.0, 0.0), (1.0, 0.8), (2.0, 1.0)]),
                Shape::Constant(1.0),
                Shape::RampDown,
            ],
            1.0,
            0,
            2,
        )
        .unwrap();
    }

    #[test]
    fn hamiltonian_examples() {
        let p = lambda_protocol(3.0);
        let h = p.hamiltonian_at(1.0).unwrap();
        // f = (1/3, 2/3)
        assert!((h[(0, 2)] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 2)] - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(h[(0, 1)], c(0.0, 0.0));
        let h0 = p.hamiltonian_at(0.0).unwrap();
        assert!(h0.row(0).iter().all(|z| *z == c(0.0, 0.0)));
        assert!(matches!(p.hamiltonian_at(3.5), Err(Error::TimeOutOfRange { .. })));

        let g = path(3).unwrap();
        let s = ControlSchedule::new(
            &g,
            1.0,
            vec![Shape::Tabulated(vec![(0.0, 0.0), (0.5, 1.0), (1.0, 1.0)]), Shape::RampDown],
            1.0,
            0,
            1,
        )
        .unwrap();
        let h = Protocol::new(&g, s).unwrap().hamiltonian_at(0.5).unwrap();
        // f = (1, 1/2): only the (1,2) coupling is halved
        assert_eq!(h[(0, 2)], c(1.0, 0.0));
        assert_eq!(h[(1, 2)], c(0.5, 0.0));
    }

    #[test]
    fn dark_state_examples() {
        let p = lambda_protocol(3.0);
        let z = p.dark_state_at(1.0).unwrap();
        let s5 = 5f64.sqrt();
        for (x, y) in z.iter().zip([2.0 / s5, -1.0 / s5, 0.0]) {
            assert!((x - c(y, 0.0)).norm() < 1e-12);
        }
        let z0 = p.dark_state_at(0.0).unwrap();
        assert_eq!(z0.as_slice(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let zt = p.dark_state_at(3.0).unwrap();
        assert!((zt[1].norm() - 1.0).abs() < 1e-15);
        for t in [0.3, 1.1, 2.9] {
            let h = p.hamiltonian_at(t).unwrap();
            assert!(linalg::norm(&(h * p.dark_state_at(t).unwrap())) < 1e-12);
        }
    }

    #[test]
    fn lambda_adiabatic_transfer() {
        let r = evolve(&lambda_protocol(200.0), 4000).unwrap();
        assert!(r.error < 0.01, "{}", r.error);
        assert!(r.v2_population_max < 0.02);
        assert!(r.unitarity_defect < 1e-8);
        assert!(r.dark_state_residual < 1e-8);
        assert!(r.viable);
    }

    #[test]
    fn lambda_diabatic_limit() {
        let r = evolve(&lambda_protocol(0.1), 10).unwrap();
        assert!(r.error > 0.9);
    }

    #[test]
    fn zero_graph_is_free_evolution() {
        let g = build_graph(2, 1, &[], &[0, 1]).unwrap();
        let p = Protocol::new(&g, default_schedule(&g, 0, 1, 5.0, 1.0).unwrap()).unwrap();
        let r = evolve(&p, 50).unwrap();
        assert_eq!(r.error, 1.0);
        assert_eq!(r.final_state[0], c(1.0, 0.0));
        assert!(!r.viable);
    }

    #[test]
    fn trace_rows() {
        let r = evolve_traced(&lambda_protocol(2.0), 8).unwrap();
        let rows = r.trace.unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].t, 0.0);
        assert_eq!(rows[8].t, 2.0);
        assert_eq!(rows[0].populations, vec![1.0, 0.0, 0.0]);
        assert!((rows[4].gap.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        for row in &rows {
            assert!((row.populations.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_predictions() {
        assert!((transfer_phase_prediction(&path(3).unwrap(), 0, 1).unwrap().abs() - PI).abs() < 1e-12);
        assert!(transfer_phase_prediction(&path(5).unwrap(), 0, 2).unwrap().abs() < 1e-12);

        let g = WeightedGraph::new(
            2,
            1,
            vec![Edge::new(0, 2, c(0.0, 1.0)), Edge::new(1, 2, 1.0)],
            vec![0, 1],
        )
        .unwrap();
        let predicted = transfer_phase_prediction(&g, 0, 1).unwrap();
        let p = Protocol::new(&g, default_schedule(&g, 0, 1, 200.0, 1.0).unwrap()).unwrap();
        let r = evolve(&p, 4000).unwrap();
        assert!(r.error < 0.01);
        assert!(phase_distance(r.acquired_phase, predicted) < 0.05);
    }

    #[test]
    fn tstar_degenerate_threshold() {
        let g = path(3).unwrap();
        let search = TStarSearch {
            threshold: 1.0,
            ..Default::default()
        };
        let r = find_tstar(&g, 0, 1, &search).unwrap();
        assert_eq!(r.tstar, 1.0);
    }

    #[test]
    fn tstar_lambda_is_bracketed() {
        let g = path(3).unwrap();
        let r = find_tstar(&g, 0, 1, &TStarSearch::default()).unwrap();
        assert!(r.error < 0.05);
        assert!(r.tstar > 1.0 && r.tstar < 200.0);
        // the probe just below T* (within 1%) failed
        let below = r
            .probes
            .iter()
            .filter(|(t, _)| *t < r.tstar)
            .map(|(t, _)| *t)
            .fold(0.0, f64::max);
        assert!((r.tstar - below) / r.tstar <= 0.01 + 1e-12);
    }
}

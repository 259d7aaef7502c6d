//! Batch sweeps: gap scaling over graph families and transfer time over
//! tree depth and straddle strength.
//!
//! Points run in parallel on a bounded pool; results always come back in
//! configuration order, so the CSV output depends only on the config.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::dynamics::{find_tstar, TStarSearch, STEPS_PER_UNIT_TIME};
use crate::error::{Error, Result};
use crate::generators::{farthest_pair, subdivided_tree, FamilySpec};
use crate::spectral::{det_eigen_lower_bound, gap_around_zero, interlacing_gap_bound};
use crate::viability::{randomize_weights, ZERO_TOL};

pub const SCHEMA_LINE: &str = "# ctap sweep schema v1";
pub const GAP_SCHEMA_LINE: &str = "# ctap gap-scan schema v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    GapScaling,
    TreeTstar,
}

impl Experiment {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gap_scaling" | "gap-scaling" => Ok(Experiment::GapScaling),
            "tree_tstar" | "tree-tstar" => Ok(Experiment::TreeTstar),
            _ => Err(Error::InvalidParameter(format!(
                "unknown experiment `{s}` (expected gap_scaling or tree_tstar)"
            ))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::GapScaling => "gap_scaling",
            Experiment::TreeTstar => "tree_tstar",
        })
    }
}

/// A family and the sizes at which to instantiate it.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRange {
    pub family: FamilySpec,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Gap scaling only.
    pub families: Vec<FamilyRange>,
    /// Random draws per point for randomised or random families.
    pub trials: usize,
    /// Multiply edge weights by random factors in `(0, 2]` per trial.
    pub randomize: bool,
    /// Tree experiment only.
    pub depths: Vec<usize>,
    pub arity: usize,
    pub straddles: Vec<f64>,
    pub threshold: f64,
    pub steps_per_unit_time: f64,
    pub cap: f64,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            experiment: Experiment::GapScaling,
            families: Vec::new(),
            trials: 50,
            randomize: false,
            depths: Vec::new(),
            arity: 2,
            straddles: vec![1.0],
            threshold: 0.05,
            steps_per_unit_time: STEPS_PER_UNIT_TIME,
            cap: 1e5,
            seed: 0,
            jobs: None,
            out: None,
        }
    }
}

/// Inclusive integer range `a..b`, optionally `a..b:step`, or a comma list.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParameter(format!("cannot parse size range `{s}`"));
    let int = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    let out: Vec<usize> = if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (int(b)?, int(step)?),
            None => (int(rest)?, 1),
        };
        if step == 0 {
            return Err(bad());
        }
        (int(a)?..=b).step_by(step).collect()
    } else {
        s.split(',').map(int).collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(Error::InvalidParameter(format!("size range `{s}` is empty")));
    }
    Ok(out)
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("`{x}` is not a number")))
        })
        .collect()
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad("threshold must lie strictly between 0 and 1");
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1");
        }
        match self.experiment {
            Experiment::GapScaling => {
                if self.families.is_empty() || self.families.iter().any(|f| f.sizes.is_empty()) {
                    return bad("gap scaling needs at least one family with a nonempty size range");
                }
            }
            Experiment::TreeTstar => {
                if self.depths.is_empty() || self.straddles.is_empty() {
                    return bad("tree sweep needs nonempty depths and straddle values");
                }
                if self.straddles.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return bad("straddle values must be positive");
                }
            }
        }
        Ok(())
    }

    /// Applies `key=value` lines (blank lines and `#` comments ignored).
    /// Recognised keys: experiment, family, params, sizes, depths, arity,
    /// straddle, trials, randomize, threshold, steps_per_unit_time, cap,
    /// seed, jobs, out.
    pub fn apply_key_values(&mut self, text: &str) -> Result<()> {
        let mut kv = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key=value, got `{line}`"),
            })?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |k: &str, v: &str| -> Result<f64> {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("{k}={v} is not a number")))
        };
        let int = |k: &str, v: &str| -> Result<u64> {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("{k}={v} is not an integer")))
        };
        if let Some(v) = kv.remove("experiment") {
            self.experiment = Experiment::parse(&v)?;
        }
        let seed = match kv.remove("seed") {
            Some(v) => int("seed", &v)?,
            None => self.seed,
        };
        self.seed = seed;
        let params = kv.remove("params").unwrap_or_default();
        let sizes = kv.remove("sizes").map(|v| parse_sizes(&v)).transpose()?;
        if let Some(v) = kv.remove("family") {
            let family = FamilySpec::parse(&v, &params, seed)?;
            let sizes = sizes.clone().unwrap_or_else(|| vec![family.size()]);
            self.families = vec![FamilyRange { family, sizes }];
        } else if let Some(sizes) = sizes {
            for f in &mut self.families {
                f.sizes = sizes.clone();
            }
        }
        for (k, v) in kv {
            match k.as_str() {
                "depths" => self.depths = parse_sizes(&v)?,
                "arity" => self.arity = int(&k, &v)? as usize,
                "straddle" => self.straddles = parse_floats(&v)?,
                "trials" => self.trials = int(&k, &v)? as usize,
                "randomize" => {
                    self.randomize = v.parse().map_err(|_| {
                        Error::InvalidParameter(format!("randomize={v} is not true/false"))
                    })?
                }
                "threshold" => self.threshold = num(&k, &v)?,
                "steps_per_unit_time" => self.steps_per_unit_time = num(&k, &v)?,
                "cap" => self.cap = num(&k, &v)?,
                "jobs" => self.jobs = Some(int(&k, &v)? as usize),
                "out" => self.out = Some(PathBuf::from(v)),
                _ => return Err(Error::InvalidParameter(format!("unknown config key `{k}`"))),
            }
        }
        Ok(())
    }
}

/// One line of a sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub experiment: Experiment,
    pub family: String,
    pub parameter: usize,
    pub straddle: Option<f64>,
    pub n_vertices: usize,
    pub n_parties: usize,
    pub metric: String,
    pub value: f64,
    pub dispersion: f64,
    pub seed_count: usize,
    /// Reference curves: `1/|V|` and `10/√|V|` for gaps, `10√k` for T*.
    pub ref_low: Option<f64>,
    pub ref_high: Option<f64>,
    pub wall_time: f64,
}

pub const SWEEP_HEADER: [&str; 13] = [
    "experiment",
    "family",
    "parameter",
    "straddle",
    "n_vertices",
    "n_parties",
    "metric",
    "value",
    "dispersion",
    "seed_count",
    "ref_low",
    "ref_high",
    "wall_time",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.experiment.to_string(),
            self.family.clone(),
            self.parameter.to_string(),
            opt(self.straddle),
            self.n_vertices.to_string(),
            self.n_parties.to_string(),
            self.metric.clone(),
            format!("{}", self.value),
            format!("{}", self.dispersion),
            self.seed_count.to_string(),
            opt(self.ref_low),
            opt(self.ref_high),
            format!("{:.3}", self.wall_time),
        ]
    }
}

/// Sweep results plus the points that could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome<T> {
    pub rows: Vec<T>,
    pub failures: Vec<String>,
}

impl<T> SweepOutcome<T> {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }
}

/// Gap statistics of one family instance, averaged over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct GapPoint {
    pub family: String,
    pub param: usize,
    pub n_vertices: usize,
    pub n_parties: usize,
    /// Trials that produced a simple zero eigenvalue.
    pub seed_count: usize,
    pub gap_mean: f64,
    pub gap_std: f64,
    pub interlacing_bound: f64,
    pub det_bound: f64,
    pub wall_time: f64,
}

pub const GAP_HEADER: [&str; 8] = [
    "family",
    "param",
    "n_vertices",
    "seed_count",
    "gap_mean",
    "gap_std",
    "interlacing_bound",
    "det_bound",
];

impl GapPoint {
    pub fn to_rows(&self) -> Vec<SweepRow> {
        let v = self.n_vertices as f64;
        let row = |metric: &str, value: f64, dispersion: f64| SweepRow {
            experiment: Experiment::GapScaling,
            family: self.family.clone(),
            parameter: self.param,
            straddle: None,
            n_vertices: self.n_vertices,
            n_parties: self.n_parties,
            metric: metric.into(),
            value,
            dispersion,
            seed_count: self.seed_count,
            ref_low: Some(1.0 / v),
            ref_high: Some(10.0 / v.sqrt()),
            wall_time: self.wall_time,
        };
        vec![
            row("gap", self.gap_mean, self.gap_std),
            row("interlacing_bound", self.interlacing_bound, 0.0),
            row("det_bound", self.det_bound, 0.0),
        ]
    }
}

/// Seed for trial `t` of a sweep seeded with `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

struct Trial {
    n_vertices: usize,
    n_parties: usize,
    gap: f64,
    interlacing: f64,
    det: f64,
}

fn gap_trial(family: &FamilySpec, randomize: bool, seed: u64) -> Result<Trial> {
    let mut g = family.with_seed(seed).build()?;
    if randomize {
        g = randomize_weights(&g, seed);
    }
    let gap = gap_around_zero(g.adjacency().entries(), ZERO_TOL)?;
    let interlacing = interlacing_gap_bound(&g)?.value;
    let det = det_eigen_lower_bound(&g)?
        .per_party
        .iter()
        .map(|d| d.bound)
        .fold(0.0, f64::max);
    Ok(Trial {
        n_vertices: g.len(),
        n_parties: g.parties().len(),
        gap,
        interlacing,
        det,
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let jobs = jobs.or_else(|| std::env::var("CTAP_JOBS").ok()?.parse().ok());
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Gap statistics for every family and size in the config. Deterministic
/// families without randomisation run a single trial per point. Trials
/// without a simple zero eigenvalue are dropped; a point with no usable
/// trial is reported as a failure.
pub fn run_gap_scaling(config: &SweepConfig) -> Result<SweepOutcome<GapPoint>> {
    config.validate()?;
    let points: Vec<(FamilySpec, usize)> = config
        .families
        .iter()
        .flat_map(|f| f.sizes.iter().map(|&s| (f.family.with_size(s), s)))
        .collect();
    let results: Vec<std::result::Result<GapPoint, String>> = pool(config.jobs)?.install(|| {
        points
            .par_iter()
            .map(|(family, size)| {
                let start = Instant::now();
                let trials = if config.randomize || family.is_random() {
                    config.trials
                } else {
                    1
                };
                let outcomes: Vec<Result<Trial>> = (0..trials)
                    .into_par_iter()
                    .map(|t| gap_trial(family, config.randomize, trial_seed(config.seed, t)))
                    .collect();
                let mut last_err = None;
                let ok: Vec<Trial> = outcomes
                    .into_iter()
                    .filter_map(|r| r.map_err(|e| last_err = Some(e)).ok())
                    .collect();
                if ok.is_empty() {
                    return Err(format!(
                        "{family}: no usable trial ({})",
                        last_err.map(|e| e.to_string()).unwrap_or_default()
                    ));
                }
                let gaps: Vec<f64> = ok.iter().map(|t| t.gap).collect();
                let (gap_mean, gap_std) = mean_std(&gaps);
                let n = ok.len() as f64;
                Ok(GapPoint {
                    family: family.name().to_string(),
                    param: *size,
                    n_vertices: ok[0].n_vertices,
                    n_parties: ok[0].n_parties,
                    seed_count: ok.len(),
                    gap_mean,
                    gap_std,
                    interlacing_bound: ok.iter().map(|t| t.interlacing).sum::<f64>() / n,
                    det_bound: ok.iter().map(|t| t.det).sum::<f64>() / n,
                    wall_time: start.elapsed().as_secs_f64(),
                })
            })
            .collect()
    });
    Ok(split(results))
}

fn split<T>(results: Vec<std::result::Result<T, String>>) -> SweepOutcome<T> {
    let mut out = SweepOutcome {
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for r in results {
        match r {
            Ok(row) => out.rows.push(row),
            Err(msg) => out.failures.push(msg),
        }
    }
    out
}

/// T* between two farthest leaves of each subdivided tree, one row per
/// `(depth, straddle)`. A search that hits the cap yields a row with metric
/// `tstar_not_found` and value equal to the cap, and counts as a failure.
pub fn run_tree_tstar(config: &SweepConfig) -> Result<SweepOutcome<SweepRow>> {
    config.validate()?;
    let points: Vec<(usize, f64)> = config
        .depths
        .iter()
        .flat_map(|&k| config.straddles.iter().map(move |&s| (k, s)))
        .collect();
    let results: Vec<(Option<SweepRow>, Option<String>)> = pool(config.jobs)?.install(|| {
        points
            .par_iter()
            .map(|&(k, s)| {
                let start = Instant::now();
                let tree = match subdivided_tree(config.arity, k) {
                    Ok(t) => t,
                    Err(e) => return (None, Some(format!("depth {k}: {e}"))),
                };
                let ends = farthest_pair(&tree);
                let search = TStarSearch {
                    threshold: config.threshold,
                    straddle: s,
                    steps_per_unit_time: config.steps_per_unit_time,
                    cap: config.cap,
                };
                let (metric, value, failure) = match find_tstar(&tree, ends[0], ends[1], &search) {
                    Ok(r) => ("tstar", r.tstar, None),
                    Err(e @ Error::TStarNotFound { .. }) => {
                        ("tstar_not_found", config.cap, Some(format!("depth {k}, s={s}: {e}")))
                    }
                    Err(e) => return (None, Some(format!("depth {k}, s={s}: {e}"))),
                };
                let row = SweepRow {
                    experiment: Experiment::TreeTstar,
                    family: "subdivided_tree".into(),
                    parameter: k,
                    straddle: Some(s),
                    n_vertices: tree.len(),
                    n_parties: tree.parties().len(),
                    metric: metric.into(),
                    value,
                    dispersion: 0.0,
                    seed_count: 1,
                    ref_low: Some(10.0 * (k as f64).sqrt()),
                    ref_high: None,
                    wall_time: start.elapsed().as_secs_f64(),
                };
                (Some(row), failure)
            })
            .collect()
    });
    let mut out = SweepOutcome {
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for (row, failure) in results {
        out.rows.extend(row);
        out.failures.extend(failure);
    }
    Ok(out)
}

/// Runs whichever experiment the config names and returns sweep rows.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome<SweepRow>> {
    match config.experiment {
        Experiment::GapScaling => {
            let out = run_gap_scaling(config)?;
            Ok(SweepOutcome {
                rows: out.rows.iter().flat_map(GapPoint::to_rows).collect(),
                failures: out.failures,
            })
        }
        Experiment::TreeTstar => run_tree_tstar(config),
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_sweep_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{SCHEMA_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_error)?;
    for r in rows {
        w.write_record(r.record()).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_gap_csv<W: Write>(mut out: W, points: &[GapPoint]) -> Result<()> {
    writeln!(out, "{GAP_SCHEMA_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GAP_HEADER).map_err(csv_error)?;
    for p in points {
        w.write_record([
            p.family.clone(),
            p.param.to_string(),
            p.n_vertices.to_string(),
            p.seed_count.to_string(),
            format!("{}", p.gap_mean),
            format!("{}", p.gap_std),
            format!("{}", p.interlacing_bound),
            format!("{}", p.det_bound),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Slopes between consecutive points on a log-log scale.
pub fn local_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    (1..xs.len())
        .map(|i| (ys[i].ln() - ys[i - 1].ln()) / (xs[i].ln() - xs[i - 1].ln()))
        .collect()
}

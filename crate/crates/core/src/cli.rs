//! Command-line front end. Exit codes: 0 success, 1 invalid input or
//! failed computation, 2 sweep finished with some points failing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{
    default_schedule, evolve, evolve_traced, find_tstar, sequential_schedule, steps_for,
    Protocol, TStarSearch, TransferResult, STEPS_PER_UNIT_TIME,
};
use crate::error::{Error, Result};
use crate::experiments::{
    parse_floats, parse_sizes, run_gap_scaling, run_sweep, write_gap_csv, write_sweep_csv,
    Experiment, FamilyRange, SweepConfig,
};
use crate::format::{read_graph, serialize, write_graph};
use crate::generators::FamilySpec;
use crate::viability::check_viability;

#[derive(Parser, Debug)]
#[command(name = "ctap", version, about = "Adiabatic transfer on semi-bipartite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph from one of the built-in families.
    Generate(GenerateArgs),
    /// Report every viability condition for a graph file.
    Check {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Gap around zero across a range of family sizes.
    GapScan(GapScanArgs),
    /// Run one transfer protocol.
    Simulate(SimulateArgs),
    /// Search for the shortest total time reaching the error threshold.
    Tstar(TstarArgs),
    /// Batch experiment with CSV output.
    Sweep(SweepArgs),
}

/// `name` or `name:key=value,...`.
fn family_arg(spec: &str, params: Option<&str>, seed: u64) -> Result<FamilySpec> {
    let (name, inline) = spec.split_once(':').unwrap_or((spec, ""));
    let joined = [inline, params.unwrap_or("")]
        .iter()
        .filter(|s| !s.is_empty())
        .copied()
        .collect::<Vec<_>>()
        .join(",");
    FamilySpec::parse(name, &joined, seed)
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Family name, optionally with parameters: `hex_grid:k=3`.
    #[arg(long)]
    family: String,
    /// Extra `key=value,...` parameters.
    #[arg(long)]
    params: Option<String>,
    /// Overrides the growing parameter (depth, k, arm length, m or n).
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiply weights by random factors in (0, 2].
    #[arg(long)]
    randomize: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GapScanArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    params: Option<String>,
    /// `a..b`, `a..b:step` or `a,b,c`.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    randomize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    #[arg(long)]
    time: f64,
    #[arg(long, default_value_t = 1.0)]
    straddle: f64,
    /// Defaults to 20 steps per unit time.
    #[arg(long)]
    steps: Option<usize>,
    /// Use the sequential ramps instead of the simultaneous ones.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TstarArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    #[arg(long, default_value_t = 1.0)]
    straddle: f64,
    #[arg(long, default_value_t = 0.05)]
    threshold: f64,
    #[arg(long, default_value_t = STEPS_PER_UNIT_TIME)]
    steps_per_unit_time: f64,
    #[arg(long, default_value_t = 1e5)]
    cap: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// gap_scaling or tree_tstar.
    #[arg(long)]
    experiment: Option<String>,
    /// key=value file applied before the other flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    depths: Option<String>,
    /// Comma-separated straddle factors.
    #[arg(long)]
    straddle: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    randomize: bool,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to $CTAP_JOBS, then the core count.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (including the program name) and runs the command,
/// printing to the process's stdout and stderr.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`cli_main`] with explicit output streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate(a) => generate(a, out),
        Command::Check { graph } => {
            let g = read_graph(graph)?;
            let report = check_viability(&g);
            write!(out, "{}\n{}", report.to_text(), report.to_key_values())?;
            Ok(0)
        }
        Command::GapScan(a) => gap_scan(a, out, err),
        Command::Simulate(a) => simulate(a, out),
        Command::Tstar(a) => {
            let g = read_graph(&a.graph)?;
            let search = TStarSearch {
                threshold: a.threshold,
                straddle: a.straddle,
                steps_per_unit_time: a.steps_per_unit_time,
                cap: a.cap,
            };
            let r = find_tstar(&g, a.from, a.to, &search)?;
            writeln!(out, "tstar={}", r.tstar)?;
            writeln!(out, "error={}", r.error)?;
            writeln!(out, "probes={}", r.probes.len())?;
            Ok(0)
        }
        Command::Sweep(a) => sweep(a, out, err),
    }
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let mut family = family_arg(&a.family, a.params.as_deref(), a.seed)?;
    if let Some(size) = a.size {
        family = family.with_size(size);
    }
    let mut g = family.build()?;
    if a.randomize {
        g = crate::viability::randomize_weights(&g, a.seed);
    }
    match a.out {
        Some(path) => write_graph(path, &g)?,
        None => out.write_all(serialize(&g).as_bytes())?,
    }
    Ok(0)
}

fn open_out(path: &Option<PathBuf>) -> Result<Option<BufWriter<File>>> {
    Ok(match path {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    })
}

fn report_failures(failures: &[String], err: &mut dyn Write) -> Result<i32> {
    for f in failures {
        writeln!(err, "point failed: {f}")?;
    }
    Ok(if failures.is_empty() { 0 } else { 2 })
}

fn gap_scan(a: GapScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let family = family_arg(&a.family, a.params.as_deref(), a.seed)?;
    let config = SweepConfig {
        experiment: Experiment::GapScaling,
        families: vec![FamilyRange {
            family,
            sizes: parse_sizes(&a.sizes)?,
        }],
        trials: a.trials,
        randomize: a.randomize,
        seed: a.seed,
        jobs: a.jobs,
        ..Default::default()
    };
    let result = run_gap_scaling(&config)?;
    match open_out(&a.out)? {
        Some(file) => write_gap_csv(file, &result.rows)?,
        None => write_gap_csv(&mut *out, &result.rows)?,
    }
    report_failures(&result.failures, err)
}

fn print_result(r: &TransferResult, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "error={}", r.error)?;
    writeln!(out, "acquired_phase={}", r.acquired_phase)?;
    match r.predicted_phase {
        Some(p) => writeln!(out, "predicted_phase={p}")?,
        None => writeln!(out, "predicted_phase=")?,
    }
    writeln!(out, "v2_population_max={}", r.v2_population_max)?;
    writeln!(out, "unitarity_defect={:e}", r.unitarity_defect)?;
    writeln!(out, "dark_state_residual={:e}", r.dark_state_residual)?;
    writeln!(out, "viable={}", r.viable)?;
    Ok(())
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    if a.from == a.to {
        return Err(Error::SameEndpoints(a.from));
    }
    let schedule = if a.sequential {
        sequential_schedule(&g, a.from, a.to, a.time)?
    } else {
        default_schedule(&g, a.from, a.to, a.time, a.straddle)?
    };
    let protocol = Protocol::new(&g, schedule)?;
    let steps = a.steps.unwrap_or_else(|| steps_for(a.time, STEPS_PER_UNIT_TIME));
    let r = if a.trace.is_some() {
        evolve_traced(&protocol, steps)?
    } else {
        evolve(&protocol, steps)?
    };
    if let (Some(path), Some(rows)) = (&a.trace, &r.trace) {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
        let mut header = vec!["t".to_string()];
        header.extend((0..g.len()).map(|v| format!("pop_{v}")));
        header.push("gap".into());
        header.extend((0..g.n1()).map(|v| format!("f_{v}")));
        w.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
        for row in rows {
            let mut rec = vec![format!("{}", row.t)];
            rec.extend(row.populations.iter().map(|p| format!("{p}")));
            rec.push(row.gap.map(|x| format!("{x}")).unwrap_or_default());
            rec.extend(row.controls.iter().map(|f| format!("{f}")));
            w.write_record(&rec).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
    }
    print_result(&r, out)?;
    Ok(0)
}

fn sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut config = SweepConfig::default();
    if let Some(path) = &a.config {
        config.apply_key_values(&std::fs::read_to_string(path)?)?;
    }
    if let Some(e) = &a.experiment {
        config.experiment = Experiment::parse(e)?;
    }
    if let Some(s) = a.seed {
        config.seed = s;
    }
    if let Some(f) = &a.family {
        let family = family_arg(f, a.params.as_deref(), config.seed)?;
        let sizes = match &a.sizes {
            Some(s) => parse_sizes(s)?,
            None => vec![family.size()],
        };
        config.families = vec![FamilyRange { family, sizes }];
    } else if let Some(s) = &a.sizes {
        let sizes = parse_sizes(s)?;
        for f in &mut config.families {
            f.sizes = sizes.clone();
        }
    }
    if let Some(d) = &a.depths {
        config.depths = parse_sizes(d)?;
    }
    if let Some(s) = &a.straddle {
        config.straddles = parse_floats(s)?;
    }
    if let Some(t) = a.trials {
        config.trials = t;
    }
    if a.randomize {
        config.randomize = true;
    }
    if let Some(t) = a.threshold {
        config.threshold = t;
    }
    if a.jobs.is_some() {
        config.jobs = a.jobs;
    }
    if a.out.is_some() {
        config.out = a.out.clone();
    }

    let result = run_sweep(&config)?;
    match open_out(&config.out)? {
        Some(file) => write_sweep_csv(file, &result.rows)?,
        None => write_sweep_csv(&mut *out, &result.rows)?,
    }
    report_failures(&result.failures, err)
}

//! The `fleetmin` command line.
//!
//! Subcommands: `solve`, `certify`, `verify`, `gen`, `check`, `gap-search`,
//! `bench`. Human-readable summaries go to standard output; JSON and CSV go
//! only to `--out` files (CSV from `gen` falls back to standard output).

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::compat::build_graph;
use crate::duality::{certificate_from_matching, verify_certificate, IncompatibleCertificate};
use crate::error::FleetError;
use crate::fleet::{decompose_trajectories, verify_solution, FleetSolution, Solved};
use crate::ingest::{
    generate_instance, parse_matrix, parse_trips_csv, read_solution_json, write_solution_json,
    write_trips_csv, GeneratorConfig, SolutionJson,
};
use crate::matching::{max_matching, verify_matching};
use crate::model::{validate_instance, Instance, TravelTimeModel};
use crate::oracle::{agreement, duality_gap, search_counterexample, OracleBounds, SearchConfig};

/// Process exit status. The numeric codes are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InvalidInput = 1,
    VerificationFailed = 2,
    InternalInvariant = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

pub const THREADS_ENV: &str = "FLEETMIN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "fleetmin",
    about = "Minimum fleet sizing with incompatibility certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum fleet, trajectories and certificate for a trips file.
    Solve(SolveArgs),
    /// Pairwise-incompatible certificate only.
    Certify(SolveArgs),
    /// Check a solution JSON against a trips file.
    Verify(VerifyArgs),
    /// Write a seeded random trips file.
    Gen(GenArgs),
    /// Compare solver output with brute-force oracles on seeded instances.
    Check(BatchArgs),
    /// Look for seeded instances with a non-zero duality gap.
    GapSearch(GapSearchArgs),
    /// Time the pipeline on generated instances.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// line | euclidean | manhattan | matrix:PATH
    #[arg(long, default_value = "euclidean")]
    model: String,
    #[arg(long, default_value_t = 1.0)]
    speed: f64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    trips: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    trips: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    /// Overrides the `delta` recorded in the solution file.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Debug, Args)]
struct GeneratorArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4.0)]
    horizon: f64,
    #[arg(long, default_value_t = 1.2)]
    slack: f64,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Debug, Args)]
struct GapSearchArgs {
    #[command(flatten)]
    batch: BatchArgs,
    #[arg(long)]
    delta: Option<f64>,
    /// Where to write the first counterexample as a trips CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Instance sizes; defaults to 500, 1000, 2000, 5000.
    #[arg(long, num_args = 1..)]
    n: Vec<usize>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long)]
    delta: Option<f64>,
}

/// A command failure with the exit status it maps to.
#[derive(Debug)]
struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::InvalidInput,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::VerificationFailed,
            message: message.into(),
        }
    }
}

impl From<FleetError> for Failure {
    fn from(e: FleetError) -> Self {
        let status = match e {
            FleetError::SuccessorCycle { .. } | FleetError::NotMaximum(_) => {
                ExitStatus::InternalInvariant
            }
            _ => ExitStatus::InvalidInput,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

type CmdResult = Result<ExitStatus, Failure>;

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                ExitStatus::InvalidInput
            } else {
                let _ = write!(out, "{rendered}");
                ExitStatus::Success
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args, out, false),
        Command::Certify(args) => cmd_solve(&args, out, true),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Gen(args) => cmd_gen(&args, out),
        Command::Check(args) => cmd_check(&args, out),
        Command::GapSearch(args) => cmd_gap_search(&args, out),
        Command::Bench(args) => cmd_bench(&args, out),
    };
    match result {
        Ok(status) => status,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.status
        }
    }
}

/// Runs `f` on a rayon pool capped by `FLEETMIN_THREADS` when it is set.
fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k > 0);
    match cap {
        None => Ok(f()),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Failure::invalid(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn resolve_model(args: &ModelArgs) -> Result<TravelTimeModel, Failure> {
    let speed = args.speed;
    match args.model.as_str() {
        "line" => Ok(TravelTimeModel::Line1D),
        "euclidean" => Ok(TravelTimeModel::Euclidean { speed }),
        "manhattan" => Ok(TravelTimeModel::Manhattan { speed }),
        other => match other.strip_prefix("matrix:") {
            Some(path) => Ok(parse_matrix(open(Path::new(path))?)?),
            None => Err(Failure::invalid(format!(
                "unknown model `{other}` (expected line, euclidean, manhattan or matrix:PATH)"
            ))),
        },
    }
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_instance(trips: &Path, model: &ModelArgs, delta: Option<f64>) -> Result<Instance, Failure> {
    let model = resolve_model(model)?;
    let trips = parse_trips_csv(open(trips)?)?;
    let instance = Instance::new(trips, model).with_delta(delta);
    validate_instance(&instance, false).into_result()?;
    Ok(instance)
}

#[derive(Serialize)]
struct CertificateJson {
    n: usize,
    delta: Option<f64>,
    edge_count: usize,
    matching_size: usize,
    certificate: Vec<u64>,
    certificate_size: usize,
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, certificate_only: bool) -> CmdResult {
    let instance = load_instance(&args.trips, &args.model, args.delta)?;
    let graph = build_graph(&instance)?;
    let matching = max_matching(&graph);
    verify_matching(&graph, &matching)
        .map_err(|d| Failure::verification(format!("matching: {d}")))?;
    let certificate = certificate_from_matching(&graph, &matching)?;
    check_certificate(&instance, &certificate)?;

    if certificate_only {
        writeln!(
            out,
            "trips: {}  edges: {}  matching: {}",
            instance.n(),
            graph.edge_count(),
            matching.size()
        )?;
        writeln!(
            out,
            "certificate: {} pairwise-incompatible trips {:?}",
            certificate.size(),
            ids(&instance, &certificate.trip_indices)
        )?;
        if let Some(path) = &args.out {
            let json = CertificateJson {
                n: instance.n(),
                delta: instance.delta,
                edge_count: graph.edge_count(),
                matching_size: matching.size(),
                certificate: ids(&instance, &certificate.trip_indices),
                certificate_size: certificate.size(),
            };
            let mut sink = create(path)?;
            serde_json::to_writer_pretty(&mut sink, &json).map_err(FleetError::from)?;
            writeln!(sink)?;
            sink.flush()?;
        }
        return Ok(ExitStatus::Success);
    }

    let solution = decompose_trajectories(&instance, &matching)?;
    verify_solution(&instance, &solution)
        .map_err(|d| Failure::verification(format!("solution: {d}")))?;
    if instance.delta.is_none() && solution.fleet_size != certificate.size() {
        return Err(Failure::verification(format!(
            "fleet size {} differs from certificate size {}",
            solution.fleet_size,
            certificate.size()
        )));
    }
    let gap = match instance.delta {
        Some(_) if instance.n() <= OracleBounds::default().max_incompatible => {
            Some(duality_gap(&instance, &OracleBounds::default())?)
        }
        _ => None,
    };
    let solved = Solved {
        edge_count: graph.edge_count(),
        matching,
        solution,
        certificate,
    };
    let json = SolutionJson::new(&instance, &solved, gap.as_ref());

    writeln!(
        out,
        "trips: {}  edges: {}  matching: {}",
        json.n, json.edge_count, json.matching_size
    )?;
    writeln!(out, "fleet size: {}", json.fleet_size)?;
    writeln!(
        out,
        "certificate: {} pairwise-incompatible trips {:?}",
        json.certificate_size, json.certificate
    )?;
    match (json.min_max_gap, instance.delta) {
        (Some(g), _) => writeln!(out, "min-max gap: {g}")?,
        (None, Some(_)) => writeln!(out, "min-max gap: not computed (n above oracle bound)")?,
        (None, None) => {}
    }
    if let Some(path) = &args.out {
        write_solution_json(&json, create(path)?)?;
    }
    Ok(ExitStatus::Success)
}

fn check_certificate(instance: &Instance, cert: &IncompatibleCertificate) -> Result<(), Failure> {
    if verify_certificate(instance, cert)? {
        Ok(())
    } else {
        Err(Failure::verification(
            "certificate contains a compatible pair",
        ))
    }
}

fn ids(instance: &Instance, indices: &[usize]) -> Vec<u64> {
    indices.iter().map(|&k| instance.trips[k - 1].id).collect()
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let claimed = read_solution_json(open(&args.solution)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.solution.display())))?;
    let instance = load_instance(&args.trips, &args.model, args.delta.or(claimed.delta))?;
    let index_of: HashMap<u64, usize> = instance
        .trips
        .iter()
        .enumerate()
        .map(|(k, t)| (t.id, k + 1))
        .collect();
    let lookup = |id: &u64| {
        index_of
            .get(id)
            .copied()
            .ok_or_else(|| Failure::verification(format!("unknown trip id {id}")))
    };

    let trajectories = claimed
        .trajectories
        .iter()
        .map(|t| t.iter().map(lookup).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut solution = FleetSolution::from_trajectories(trajectories, instance.n());
    solution.fleet_size = claimed.fleet_size;
    verify_solution(&instance, &solution)
        .map_err(|d| Failure::verification(format!("solution: {d}")))?;
    writeln!(
        out,
        "solution: {} trajectories cover all {} trips",
        solution.fleet_size,
        instance.n()
    )?;

    let certificate = IncompatibleCertificate {
        trip_indices: claimed
            .certificate
            .iter()
            .map(lookup)
            .collect::<Result<_, _>>()?,
    };
    if certificate.size() != claimed.certificate_size {
        return Err(Failure::verification(
            "certificate_size does not match certificate",
        ));
    }
    if !verify_certificate(&instance, &certificate)
        .map_err(|e| Failure::verification(e.to_string()))?
    {
        return Err(Failure::verification(
            "certificate contains a compatible pair",
        ));
    }
    writeln!(
        out,
        "certificate: {} trips, pairwise incompatible",
        certificate.size()
    )?;
    if solution.fleet_size == certificate.size() {
        writeln!(
            out,
            "optimal: fleet size equals certificate size ({})",
            solution.fleet_size
        )?;
    } else {
        writeln!(
            out,
            "not certified optimal: fleet size {} vs certificate size {}",
            solution.fleet_size,
            certificate.size()
        )?;
    }
    Ok(ExitStatus::Success)
}

fn generator_config(n: usize, model: TravelTimeModel, args: &GeneratorArgs) -> GeneratorConfig {
    GeneratorConfig::new(n, model, args.seed)
        .horizon(args.horizon)
        .slack(args.slack)
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> CmdResult {
    let config = generator_config(args.n, resolve_model(&args.model)?, &args.generator);
    let instance = generate_instance(&config)?;
    match &args.out {
        Some(path) => {
            write_trips_csv(&instance.trips, create(path)?)?;
            writeln!(out, "wrote {} trips to {}", instance.n(), path.display())?;
        }
        None => write_trips_csv(&instance.trips, out)?,
    }
    Ok(ExitStatus::Success)
}

fn search_config(args: &BatchArgs, delta: Option<f64>) -> Result<SearchConfig, Failure> {
    let model = resolve_model(&args.model)?;
    if !model.is_analytic() {
        return Err(Failure::invalid("seeded batches need an analytic model"));
    }
    if args.n_max == 0 {
        return Err(Failure::invalid("--n-max must be at least 1"));
    }
    let mut config = SearchConfig::new(args.cases, args.n_max, delta, model, args.generator.seed);
    config.horizon = args.generator.horizon;
    config.slack = args.generator.slack;
    let bound = config.bounds.min_fleet.min(config.bounds.max_incompatible);
    if args.n_max > bound {
        return Err(Failure::invalid(format!(
            "--n-max {} exceeds oracle bound {bound}",
            args.n_max
        )));
    }
    Ok(config)
}

fn cmd_check(args: &BatchArgs, out: &mut dyn Write) -> CmdResult {
    let config = search_config(args, None)?;
    let results = with_pool(|| {
        (0..config.cases)
            .into_par_iter()
            .map(|case| agreement(&config.case_instance(case)?, &config.bounds))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let equal = results.iter().filter(|a| a.holds()).count();
    let weak = results.iter().filter(|a| a.weak_duality()).count();
    for (case, a) in results.iter().enumerate().filter(|(_, a)| !a.holds()) {
        writeln!(out, "case {case}: disagreement {a:?}")?;
    }
    writeln!(out, "{equal}/{} min-max equalities", results.len())?;
    writeln!(out, "{weak}/{} weak-duality checks", results.len())?;
    Ok(if equal == results.len() && weak == results.len() {
        ExitStatus::Success
    } else {
        ExitStatus::VerificationFailed
    })
}

fn cmd_gap_search(args: &GapSearchArgs, out: &mut dyn Write) -> CmdResult {
    let config = search_config(&args.batch, args.delta)?;
    match with_pool(|| search_counterexample(&config))?? {
        None => writeln!(out, "no non-zero gap in {} cases", config.cases)?,
        Some((case, instance, report)) => {
            writeln!(
                out,
                "case {case}: n = {}, fleet size {}, max incompatible {}, gap {}",
                instance.n(),
                report.fleet_size,
                report.max_incompatible,
                report.gap
            )?;
            writeln!(
                out,
                "witness trips: {:?}",
                ids(&instance, &report.witness_set)
            )?;
            if let Some(path) = &args.out {
                write_trips_csv(&instance.trips, create(path)?)?;
                writeln!(out, "wrote instance to {}", path.display())?;
            }
        }
    }
    Ok(ExitStatus::Success)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let model = resolve_model(&args.model)?;
    let sizes = if args.n.is_empty() {
        vec![500, 1000, 2000, 5000]
    } else {
        args.n.clone()
    };
    writeln!(
        out,
        "{:>7} {:>10} {:>7} {:>10} {:>10} {:>10} {:>10}",
        "n", "edges", "fleet", "graph_ms", "match_ms", "cert_ms", "total_ms"
    )?;
    for n in sizes {
        let instance = generate_instance(&generator_config(n, model.clone(), &args.generator))?
            .with_delta(args.delta);
        let start = Instant::now();
        let graph = build_graph(&instance)?;
        let t_graph = start.elapsed();
        let matching = max_matching(&graph);
        let t_match = start.elapsed();
        let certificate = certificate_from_matching(&graph, &matching)?;
        let t_cert = start.elapsed();
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        writeln!(
            out,
            "{:>7} {:>10} {:>7} {:>10.1} {:>10.1} {:>10.1} {:>10.1}",
            n,
            graph.edge_count(),
            certificate.size(),
            ms(t_graph),
            ms(t_match - t_graph),
            ms(t_cert - t_match),
            ms(t_cert)
        )?;
    }
    Ok(ExitStatus::Success)
}

//! Command-line front end for `tap-core`: text formats, solver dispatch,
//! instance generation, verification and a benchmark harness.
//!
//! [`run`] executes one command line and returns the process exit status:
//! 0 success, 1 usage, 2 I/O, 3 validation or verification, 4 solver
//! precondition.

pub mod bench;
pub mod error;
pub mod format;
pub mod generate;
pub mod solve;
pub mod sources;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tap_core::exact::DEFAULT_BRUTE_FORCE_LIMIT;
use tap_core::preprocess::reduce_pure;
use tap_core::reductions::{
    from_cnf, from_graph, from_kdm, from_set_cover, random_instance, to_assignment, to_matching,
    to_set_cover_solution, CnfParams, RandomParams, ReductionMeta,
};
use tap_core::{Instance, Solution};

pub use crate::error::{CliError, Result};
use crate::format::{parse_instance, parse_solution, write_instance, write_solution};
use crate::solve::{run_solver, SolveOptions, SolverChoice, TieBreakChoice};

#[derive(Debug, Parser)]
#[command(name = "tap", version, about = "Target approximation: solve, generate and verify instances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and print a solution line.
    Solve(SolveArgs),
    /// Print instance statistics as JSON.
    Classify(ClassifyArgs),
    /// Drop pure exemplars and print the residual instance with its offset.
    Preprocess(PreprocessArgs),
    /// Build an instance from a source problem or at random.
    Generate(GenerateArgs),
    /// Check a solution file against an instance.
    Verify(VerifyArgs),
    /// Run solvers over a directory of instances and emit CSV.
    Bench(BenchArgs),
    /// Map a solution back to the source problem of a generated instance.
    Map(MapArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Write the solution here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverChoice,
    #[arg(long, value_enum, default_value = "lowest")]
    pub tie_break: TieBreakChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of red features tried by one-red-enum.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Largest exemplar count handed to brute force.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    pub fallback_limit: usize,
    /// Emit greedy's per-iteration trace as comment lines.
    #[arg(long)]
    pub trace: bool,
    /// Report greedy's best prefix instead of the full run.
    #[arg(long)]
    pub best_prefix: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Accepted for symmetry; the output is always JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    Setcover,
    Cnf,
    Kdm,
    Vc,
    Random,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenerateKind,
    /// Source problem file; a random source is drawn from --seed when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Instance file; the metadata goes to `<output>.meta.json`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the (possibly random) source problem here.
    #[arg(long)]
    pub source_output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CNF penalty features per exemplar.
    #[arg(long)]
    pub penalty: Option<usize>,
    /// CNF reward features per variable.
    #[arg(long)]
    pub reward: Option<usize>,
    /// CNF: use the tightened preset (penalty = reward = floor(a / 2)).
    #[arg(long, conflicts_with_all = ["penalty", "reward"])]
    pub tight: bool,
    /// Elements, variables, dimension size, nodes or features.
    #[arg(long, default_value_t = 8)]
    pub size: usize,
    /// Sets, clauses, tuples, edges or exemplars.
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    /// Clause width, k for matchings, or maximum exemplar weight.
    #[arg(long, default_value_t = 3)]
    pub width: usize,
    #[arg(long, default_value_t = 3)]
    pub max_occurrence: usize,
    #[arg(long, default_value_t = 0.5)]
    pub blue_fraction: f64,
    #[arg(long)]
    pub one_red: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of `*.tap` files.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "auto,greedy")]
    pub solver: Vec<SolverChoice>,
    #[arg(long, value_enum, default_value = "lowest")]
    pub tie_break: TieBreakChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    pub fallback_limit: usize,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Setcover,
    Cnf,
    Kdm,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(value_enum)]
    pub kind: MapKind,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Defaults to `<input>.meta.json`.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Solve(args) => solve(args, stdout),
        Command::Classify(args) => {
            let instance = load_instance(&args.input)?;
            emit(stdout, &format!("{}\n", serde_json::to_string_pretty(&instance.classify())?))
        }
        Command::Preprocess(args) => preprocess(args, stdout),
        Command::Generate(args) => generate(args, stdout),
        Command::Verify(args) => verify(args, stdout),
        Command::Bench(args) => bench(args, stdout),
        Command::Map(args) => map(args, stdout),
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read_file(path)?)
}

/// `<path>.meta.json`, next to the instance file.
pub fn meta_path(instance_path: &Path) -> PathBuf {
    let mut name = instance_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn parse_meta(text: &str) -> Result<ReductionMeta> {
    Ok(serde_json::from_str(text)?)
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn emit_or_write(output: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match output {
        Some(path) => write_file(path, text),
        None => emit(stdout, text),
    }
}

fn join(ids: impl IntoIterator<Item = impl ToString>) -> String {
    ids.into_iter().map(|id| id.to_string()).collect::<Vec<_>>().join(" ")
}

fn one_based(selected: &[usize]) -> Vec<usize> {
    selected.iter().map(|j| j + 1).collect()
}

fn solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let options = SolveOptions {
        tie_break: SolveOptions::tie_break(args.tie_break, args.seed),
        budget: args.budget,
        fallback_limit: args.fallback_limit,
        best_prefix: args.best_prefix,
    };
    let outcome = run_solver(&instance, args.solver, &options)?;
    let report = &outcome.report;
    let text = if args.json {
        let mut value = json!({
            "solver": report.solver_name,
            "exact": report.exact,
            "margin": report.solution.margin,
            "selected": one_based(&report.solution.selected),
            "work": report.work,
        });
        if let (true, Some(trace)) = (args.trace, &outcome.trace) {
            value["trace"] = serde_json::to_value(trace)?;
        }
        format!("{}\n", serde_json::to_string_pretty(&value)?)
    } else {
        let mut text = format!(
            "c solver {}\nc exact {}\nc work {}\n",
            report.solver_name, report.exact, report.work
        );
        if let (true, Some(trace)) = (args.trace, &outcome.trace) {
            text.push_str(&format!("c trace picked_red {}\n", join(&trace.picked_red)));
            text.push_str(&format!("c trace newly_covered {}\n", join(&trace.newly_covered)));
            text.push_str(&format!("c trace prefix_margins {}\n", join(&trace.prefix_margins)));
        }
        text.push_str(&write_solution(&report.solution));
        text
    };
    emit_or_write(args.output.as_deref(), stdout, &text)
}

fn preprocess(args: &PreprocessArgs, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let reduced = reduce_pure(&instance);
    let text = if args.json {
        let value = json!({
            "margin_offset": reduced.margin_offset,
            "forced_in": one_based(&reduced.forced_in),
            "forced_out": one_based(&reduced.forced_out),
            "exemplar_map": one_based(&reduced.exemplar_map),
            "feature_map": reduced.feature_map,
            "residual": write_instance(&reduced.residual),
        });
        format!("{}\n", serde_json::to_string_pretty(&value)?)
    } else {
        format!(
            "c offset {}\nc forced-in {}\nc forced-out {}\nc exemplar-map {}\nc feature-map {}\n{}",
            reduced.margin_offset,
            join(one_based(&reduced.forced_in)),
            join(one_based(&reduced.forced_out)),
            join(one_based(&reduced.exemplar_map)),
            join(&reduced.feature_map),
            write_instance(&reduced.residual)
        )
    };
    emit_or_write(args.output.as_deref(), stdout, &text)
}

fn generate(args: &GenerateArgs, stdout: &mut dyn Write) -> Result<()> {
    let source_text = args.input.as_deref().map(read_file).transpose()?;
    let (instance, meta, source) = match args.kind {
        GenerateKind::Setcover => {
            let source = match &source_text {
                Some(text) => sources::parse_set_system(text)?,
                None => generate::random_set_system(args.seed, args.size, args.count)?,
            };
            let (instance, meta) = from_set_cover(&source)?;
            (instance, Some(meta), Some(sources::write_set_system(&source)))
        }
        GenerateKind::Cnf => {
            let source = match &source_text {
                Some(text) => sources::parse_cnf(text)?,
                None => generate::random_cnf(args.seed, args.size, args.count, args.width)?,
            };
            let preset = if args.tight { source.tight_params() } else { source.hardness_params() };
            let params = CnfParams {
                penalty: args.penalty.unwrap_or(preset.penalty),
                reward: args.reward.unwrap_or(preset.reward),
            };
            let (instance, meta) = from_cnf(&source, params)?;
            (instance, Some(meta), Some(sources::write_cnf(&source)))
        }
        GenerateKind::Kdm => {
            let source = match &source_text {
                Some(text) => sources::parse_kdm(text)?,
                None => generate::random_kdm(args.seed, args.width, args.size, args.count)?,
            };
            let (instance, meta) = from_kdm(&source)?;
            (instance, Some(meta), Some(sources::write_kdm(&source)))
        }
        GenerateKind::Vc => {
            let graph = match &source_text {
                Some(text) => sources::parse_graph(text)?,
                None => generate::random_graph(args.seed, args.size, args.count)?,
            };
            let (instance, meta) = from_graph(graph.n_nodes, &graph.edges)?;
            (instance, Some(meta), Some(sources::write_graph(&graph)))
        }
        GenerateKind::Random => {
            if args.input.is_some() {
                return Err(CliError::Usage("`generate random` takes no --input".into()));
            }
            let params = RandomParams {
                seed: args.seed,
                n_features: args.size,
                n_exemplars: args.count,
                blue_fraction: args.blue_fraction,
                max_weight: args.width,
                max_occurrence: args.max_occurrence,
                one_red: args.one_red,
            };
            (random_instance(&params)?, None, None)
        }
    };
    if let (Some(path), Some(text)) = (&args.source_output, &source) {
        write_file(path, text)?;
    }
    let text = write_instance(&instance);
    match &args.output {
        Some(path) => {
            write_file(path, &text)?;
            if let Some(meta) = &meta {
                write_file(&meta_path(path), &format!("{}\n", serde_json::to_string_pretty(meta)?))?;
            }
            Ok(())
        }
        None => emit(stdout, &text),
    }
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let solution = parse_solution(&read_file(&args.solution)?, &instance)?;
    let text = if args.json {
        format!(
            "{}\n",
            json!({"valid": true, "margin": solution.margin, "selected": one_based(&solution.selected)})
        )
    } else {
        format!("ok margin {}\n", solution.margin)
    };
    emit(stdout, &text)
}

fn bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let corpus = bench::load_corpus(&args.input)?;
    let options = SolveOptions {
        tie_break: SolveOptions::tie_break(args.tie_break, args.seed),
        budget: args.budget,
        fallback_limit: args.fallback_limit,
        best_prefix: false,
    };
    let mut solvers = args.solver.clone();
    solvers.sort();
    solvers.dedup();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let records = pool.install(|| bench::run_bench(&corpus, &solvers, &options));
    let mut buffer = Vec::new();
    bench::write_csv(&records, &mut buffer)?;
    emit_or_write(args.output.as_deref(), stdout, &String::from_utf8_lossy(&buffer))
}

fn map(args: &MapArgs, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let meta_file = args.meta.clone().unwrap_or_else(|| meta_path(&args.input));
    let meta = parse_meta(&read_file(&meta_file)?)?;
    let solution: Solution = parse_solution(&read_file(&args.solution)?, &instance)?;
    let text = match args.kind {
        MapKind::Setcover => {
            let cover = to_set_cover_solution(&meta, &instance, &solution)?;
            if args.json {
                format!("{}\n", json!({"cover": cover, "size": cover.len()}))
            } else {
                format!("c cover size {}\nv {}\n", cover.len(), join(&cover))
            }
        }
        MapKind::Cnf => {
            let recovery = to_assignment(&meta, &instance, &solution)?;
            let literals: Vec<i64> = recovery
                .assignment
                .iter()
                .enumerate()
                .map(|(i, &value)| if value { i as i64 + 1 } else { -(i as i64 + 1) })
                .collect();
            if args.json {
                format!(
                    "{}\n",
                    json!({"assignment": literals, "satisfied": recovery.satisfied, "repaired_margin": recovery.repaired.margin})
                )
            } else {
                format!("c satisfied {}\nv {} 0\n", recovery.satisfied, join(&literals))
            }
        }
        MapKind::Kdm => {
            let matching = to_matching(&meta, &instance, &solution)?;
            if args.json {
                format!("{}\n", json!({"matching": matching, "size": matching.len()}))
            } else {
                format!("c matching size {}\nm {}\n", matching.len(), join(&matching))
            }
        }
    };
    emit(stdout, &text)
}

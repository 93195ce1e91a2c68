use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use triangle_sched::exact::{optimal_makespan_with, ExactOptions, DEFAULT_MAX_JOBS};
use triangle_sched::generate::{
    generate, random_demands, ratio_search, rng, GeneratorKind, GeneratorSpec, SearchOptions,
};
use triangle_sched::greedy::{greedy_schedule, greedy_tree};
use triangle_sched::hardness::{encode, ThreeDmInstance};
use triangle_sched::instance::InstanceFile;
use triangle_sched::qptas::{qptas_schedule_with, Epsilon, DEFAULT_MAX_STATES};
use triangle_sched::rational::{parse_rational, to_json, Rational};
use triangle_sched::render::{ascii_schedule, ascii_trace, svg_schedule, svg_trace, RenderOptions};
use triangle_sched::simulate::{simulate, DemandVector, ExecutionTrace};
use triangle_sched::{Instance, Schedule};

/// Triangle scheduling: solvers, generators, simulation and rendering.
///
/// All files are JSON. Integers are written bare; other rationals as
/// "num/den" strings. Exit status is 0 on success, 1 when the input is
/// rejected or a computation fails, and 2 on bad flags.
#[derive(Parser)]
#[command(name = "ts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Solve an instance and print the makespan and schedule.
    Solve(SolveArgs),
    /// Check a schedule file for feasibility.
    Check(CheckArgs),
    /// Execute a schedule against actual demands.
    Simulate(SimulateArgs),
    /// Draw a schedule or an execution trace.
    Render(RenderArgs),
    /// Benchmarks.
    #[command(subcommand)]
    Bench(Bench),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    RatioBounded,
    Reduction,
    PaperFixture,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, env = "TS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_size: u64,
    /// Binary tree ratio bound for ratio-bounded, e.g. 2 or 3/2.
    #[arg(long, value_parser = rational_arg)]
    bound: Option<Rational>,
    /// Fixture name for paper-fixture.
    #[arg(long)]
    name: Option<String>,
    /// 3DM instance file for reduction: {"D": .., "a": [..], "b": [..], "c": [..]}.
    #[arg(long)]
    tdm: Option<PathBuf>,
    /// Reduction multiplier; defaults to ceil(5D/4).
    #[arg(long = "M")]
    m: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the job labels of a reduction.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Greedy,
    Exact,
    Qptas,
    Lb,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Instance file: {"sizes": [..]}.
    #[arg(long)]
    input: PathBuf,
    /// Accuracy for qptas: 1, 1/2, 1/4, ...
    #[arg(long, default_value = "1/2")]
    eps: Epsilon,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_JOBS)]
    max_jobs: usize,
    /// Write the per-step greedy trace here (greedy only).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the greedy placement tree as DOT here (greedy only).
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Write the schedule here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    schedule: PathBuf,
    /// Demand file: a JSON array with one entry per job.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    demands: Option<PathBuf>,
    /// Draw demands uniformly from [0, p_j].
    #[arg(long)]
    random: bool,
    #[arg(long, env = "TS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Ascii,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long, conflicts_with = "trace", required_unless_present = "trace")]
    schedule: Option<PathBuf>,
    /// Execution trace written by `simulate`.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    format: Format,
    /// Pixels (svg) or characters (ascii) per time unit.
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Bench {
    /// Search random instances for a large greedy/optimal ratio.
    RatioSearch(RatioSearchArgs),
}

#[derive(Args)]
struct RatioSearchArgs {
    #[arg(long, default_value_t = 9)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, env = "TS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    max_size: u64,
    /// Only draw instances with binary tree ratio at most this.
    #[arg(long, value_parser = rational_arg)]
    bound: Option<Rational>,
    /// Leave the 9-job fixture out of the pool.
    #[arg(long)]
    no_fixture: bool,
    /// Write every instance beating 21/20 here.
    #[arg(long)]
    findings: Option<PathBuf>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn usage(kind: ErrorKind, msg: &str) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn to_pretty<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes to `out` when given, stdout otherwise.
fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<()> {
    let kind = match args.kind {
        GenKind::Random => GeneratorKind::Random,
        GenKind::RatioBounded => match args.bound {
            Some(bound) => GeneratorKind::RatioBounded { bound },
            None => usage(
                ErrorKind::MissingRequiredArgument,
                "--kind ratio-bounded needs --bound",
            ),
        },
        GenKind::PaperFixture => match args.name {
            Some(name) => GeneratorKind::PaperFixture(name),
            None => usage(
                ErrorKind::MissingRequiredArgument,
                "--kind paper-fixture needs --name",
            ),
        },
        GenKind::Reduction => {
            let Some(path) = args.tdm.as_deref() else {
                usage(
                    ErrorKind::MissingRequiredArgument,
                    "--kind reduction needs --tdm",
                )
            };
            let tdm: ThreeDmInstance = read_json(path)?;
            tdm.validate()?;
            let m = args.m.unwrap_or_else(|| tdm.min_multiplier());
            GeneratorKind::Reduction { tdm, m }
        }
    };
    if args.labels.is_some() && !matches!(kind, GeneratorKind::Reduction { .. }) {
        usage(
            ErrorKind::ArgumentConflict,
            "--labels only applies to --kind reduction",
        );
    }
    if let (Some(path), GeneratorKind::Reduction { tdm, m }) = (&args.labels, &kind) {
        let (_, labels) = encode(tdm, *m)?;
        write_file(path, &to_pretty(&labels)?)?;
    }
    let spec = GeneratorSpec {
        kind,
        n: args.n,
        seed: args.seed,
        max_size: args.max_size,
    };
    let instance = generate(&spec)?;
    emit(
        args.out.as_deref(),
        &to_pretty(&InstanceFile::from(&instance))?,
    )
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<()> {
    if args.algo != Algo::Greedy && (args.trace.is_some() || args.tree.is_some()) {
        usage(
            ErrorKind::ArgumentConflict,
            "--trace and --tree need --algo greedy",
        );
    }
    let instance: Instance = read_json(&args.input)?;
    let (schedule, mut report) = match args.algo {
        Algo::Lb => {
            let report = json!({
                "algo": "lb",
                "lower_bound": instance.lower_bound(),
                "binary_tree_ratio": to_json(&instance.binary_tree_ratio()),
            });
            return emit(None, &to_pretty(&report)?);
        }
        Algo::Greedy => {
            let (schedule, trace) = greedy_schedule(&instance);
            if let Some(path) = &args.trace {
                write_file(path, &to_pretty(&trace)?)?;
            }
            if let Some(path) = &args.tree {
                write_file(path, &greedy_tree(&trace).to_dot())?;
            }
            (schedule, json!({ "algo": "greedy" }))
        }
        Algo::Exact => {
            let opts = ExactOptions {
                max_jobs: args.max_jobs,
                ..ExactOptions::default()
            };
            let solution = optimal_makespan_with(&instance, opts)?;
            let report = json!({ "algo": "exact", "nodes": solution.nodes });
            (solution.schedule, report)
        }
        Algo::Qptas => {
            let output = qptas_schedule_with(&instance, args.eps, args.max_states)?;
            let report = json!({
                "algo": "qptas",
                "eps": args.eps.to_string(),
                "guarantee": to_json(&args.eps.guarantee()),
                "stats": output.stats,
            });
            (output.schedule, report)
        }
    };
    schedule.ensure_feasible()?;
    report["makespan"] = to_json(&schedule.makespan()?);
    report["lower_bound"] = json!(instance.lower_bound());
    report["schedule"] = serde_json::to_value(&schedule)?;
    if let Some(path) = &args.out {
        write_file(path, &to_pretty(&schedule)?)?;
    }
    emit(None, &to_pretty(&report)?)
}

fn cmd_check(args: CheckArgs) -> anyhow::Result<()> {
    let schedule: Schedule = read_json(&args.schedule)?;
    if schedule.is_empty() {
        bail!("{} has no jobs", args.schedule.display());
    }
    let violations = schedule.check_feasible();
    let report = json!({
        "feasible": violations.is_empty(),
        "jobs": schedule.len(),
        "makespan": to_json(&schedule.makespan()?),
        "violations": violations,
    });
    emit(None, &to_pretty(&report)?)?;
    if !violations.is_empty() {
        bail!(
            "schedule is infeasible: {} conflicting pairs",
            violations.len()
        );
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let schedule: Schedule = read_json(&args.schedule)?;
    let demands = match &args.demands {
        Some(path) => read_json::<DemandVector>(path)?,
        None => random_demands(&mut rng(args.seed), &schedule),
    };
    let trace = simulate(&schedule, &demands)?;
    emit(args.out.as_deref(), &to_pretty(&trace)?)
}

fn cmd_render(args: RenderArgs) -> anyhow::Result<()> {
    let scale = args.scale.unwrap_or(match args.format {
        Format::Svg => RenderOptions::default().scale,
        Format::Ascii => 1.0,
    });
    if !(scale.is_finite() && scale > 0.0) {
        usage(ErrorKind::ValueValidation, "--scale must be positive");
    }
    let opts = RenderOptions {
        scale,
        ..RenderOptions::default()
    };
    let text = match (&args.schedule, &args.trace) {
        (Some(path), _) => {
            let schedule: Schedule = read_json(path)?;
            match args.format {
                Format::Svg => svg_schedule(&schedule, opts)?,
                Format::Ascii => ascii_schedule(&schedule, scale)?,
            }
        }
        (None, Some(path)) => {
            let trace: ExecutionTrace = read_json(path)?;
            match args.format {
                Format::Svg => svg_trace(&trace, opts)?,
                Format::Ascii => ascii_trace(&trace, scale)?,
            }
        }
        (None, None) => unreachable!("clap requires one of --schedule and --trace"),
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_ratio_search(args: RatioSearchArgs) -> anyhow::Result<()> {
    let mut opts = SearchOptions::new(args.n, args.iterations, args.seed);
    opts.max_size = args.max_size;
    opts.ratio_bound = args.bound;
    opts.include_fixture = !args.no_fixture;
    let report = ratio_search(&opts)?;
    if let Some(path) = &args.findings {
        write_file(path, &to_pretty(&report.findings)?)?;
    }
    let summary = json!({
        "ratio": to_json(&report.ratio),
        "witness": report.witness,
        "iterations": report.iterations,
        "seed": report.seed,
        "findings": report.findings.len(),
    });
    emit(None, &to_pretty(&summary)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Render(args) => cmd_render(args),
        Command::Bench(Bench::RatioSearch(args)) => cmd_ratio_search(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

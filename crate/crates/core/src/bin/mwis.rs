//! Command-line front end: kernelize, solve, lift, verify, gen.
//!
//! Exit codes: 0 ok, 1 verification or lifting failure, 2 usage or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use mwis_kernel::generate::gen_random;
use mwis_kernel::io::{
    expand_ids, parse_mapping, parse_metis, parse_solution, write_atomic, write_mapping, write_metis_mapped,
    write_solution, Instance, InstanceFormat, RunReport,
};
use mwis_kernel::scheduler::KernelSize;
use mwis_kernel::solver::{solve_exact, SolveBudget};
use mwis_kernel::{
    parse_rule_list, reduce, verify_kernel, ReducerConfig, ReductionTrace, Solution, VertexId, VertexSet,
    WeightedGraph,
};

#[derive(Parser)]
#[command(name = "mwis", version, about = "Exact kernelization for maximum weight independent set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an instance to a kernel, writing the kernel, its id mapping, the trace and stats.
    Kernelize(KernelizeArgs),
    /// Solve an instance: kernelize, solve the kernel exactly, lift.
    Solve(SolveArgs),
    /// Map a kernel solution back to the original instance.
    Lift(LiftArgs),
    /// Check a kernelization against an exact solution of the kernel.
    Verify(VerifyArgs),
    /// Write a random instance.
    Gen(GenArgs),
}

#[derive(Args)]
struct RuleArgs {
    /// Comma-separated rule names, `all`, `default`, or `t1`..`t5`.
    #[arg(long)]
    rules: Option<String>,
    /// JSON reducer configuration (enabled rules, budgets, tiers, time limit).
    #[arg(long)]
    tier_config: Option<PathBuf>,
}

#[derive(Args)]
struct KernelizeArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value = "metis")]
    format: InstanceFormat,
    #[command(flatten)]
    rules: RuleArgs,
    /// Kernel in METIS format; the id mapping goes to KERNEL.map.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Stop reducing after this many seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Record per-rule and wall time in the stats.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value = "metis")]
    format: InstanceFormat,
    /// Skip kernelization and solve the instance directly.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Solution file; printed to stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Solution of the kernel, in kernel file ids.
    #[arg(long)]
    kernel_solution: PathBuf,
    #[arg(long)]
    original: PathBuf,
    #[arg(long, default_value = "metis")]
    format: InstanceFormat,
    /// Kernel file; enables the independence check and maximal extension of
    /// the kernel solution, and locates KERNEL.map.
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// Kernel id mapping; defaults to KERNEL.map, or identity without a kernel.
    #[arg(long)]
    mapping: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value = "metis")]
    format: InstanceFormat,
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Rules for the fixed-point check; use the ones given to kernelize.
    #[command(flatten)]
    rules: RuleArgs,
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(short)]
    n: usize,
    #[arg(short)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    #[arg(long, default_value_t = 10)]
    wmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "metis")]
    format: InstanceFormat,
    #[arg(short, long)]
    output: PathBuf,
}

/// Error tagged with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure { code: 2, msg: msg.to_string() }
}

fn failed(msg: impl std::fmt::Display) -> Failure {
    Failure { code: 1, msg: msg.to_string() }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Res<()> {
    write_atomic(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, format: InstanceFormat) -> Res<Instance> {
    Instance::parse(&read(path)?, format).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_trace(path: &Path) -> Res<ReductionTrace> {
    ReductionTrace::from_json_lines(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn mapping_path(kernel: &Path) -> PathBuf {
    let mut s = kernel.as_os_str().to_owned();
    s.push(".map");
    PathBuf::from(s)
}

/// Kernel file plus mapping, rebuilt under internal ids.
fn load_kernel(kernel: &Path, mapping: Option<&Path>) -> Res<(WeightedGraph, Vec<VertexId>)> {
    let compact = parse_metis(&read(kernel)?).map_err(|e| usage(format!("{}: {e}", kernel.display())))?;
    let map_path = mapping.map(Path::to_path_buf).unwrap_or_else(|| mapping_path(kernel));
    let mapping = parse_mapping(&read(&map_path)?).map_err(|e| usage(format!("{}: {e}", map_path.display())))?;
    let g = expand_ids(&compact, &mapping).map_err(|e| usage(format!("{}: {e}", map_path.display())))?;
    Ok((g, mapping))
}

fn config(args: &RuleArgs, time_limit: Option<f64>) -> Res<ReducerConfig> {
    let mut config = match &args.tier_config {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => ReducerConfig::default(),
    };
    if let Some(list) = &args.rules {
        config.enabled = parse_rule_list(list).map_err(usage)?;
    }
    if let Some(t) = time_limit {
        config.time_limit_ms = Some(seconds(t)?.as_millis() as u64);
    }
    Ok(config)
}

fn seconds(t: f64) -> Res<Duration> {
    Duration::try_from_secs_f64(t).map_err(|_| usage(format!("invalid time limit {t}")))
}

fn kernelize(a: KernelizeArgs) -> Res<()> {
    let inst = load(&a.input, a.format)?;
    let mut config = config(&a.rules, a.time_limit)?;
    config.record_timing |= a.timing;
    let input = KernelSize { n: inst.graph.num_vertices(), m: inst.graph.num_edges() };
    let result = reduce(inst.graph, &config).map_err(usage)?;
    let (text, mapping) = write_metis_mapped(&result.kernel);
    write(&a.output, &text)?;
    write(&mapping_path(&a.output), &write_mapping(&mapping))?;
    write(&a.trace, &result.trace.to_json_lines())?;
    if let Some(p) = &a.stats {
        let report = RunReport { instance: a.input.display().to_string(), input, stats: result.stats.clone() };
        write(p, &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
    }
    println!(
        "kernel n={} m={} offset={} events={} fixed_point={}",
        result.stats.kernel.n,
        result.stats.kernel.m,
        result.offset,
        result.trace.len(),
        result.stats.fixed_point
    );
    Ok(())
}

fn solve_budget(time_limit: Option<f64>) -> Res<SolveBudget> {
    Ok(SolveBudget { time_limit: time_limit.map(seconds).transpose()?, ..SolveBudget::default() })
}

fn solve(a: SolveArgs) -> Res<()> {
    let inst = load(&a.input, a.format)?;
    let budget = solve_budget(a.time_limit)?;
    let (solution, optimal) = if a.exact {
        let out = solve_exact(&inst.graph, &budget);
        (out.solution().clone(), out.is_optimal())
    } else {
        let result = reduce(inst.graph.clone(), &ReducerConfig::default()).map_err(usage)?;
        let out = solve_exact(&result.kernel, &budget);
        let lifted = result.lift(out.solution(), &inst.graph).map_err(failed)?;
        (lifted, out.is_optimal())
    };
    let text = write_solution(&solution.vertices, solution.weight);
    match &a.output {
        Some(p) => {
            write(p, &text)?;
            println!("weight {} optimal {optimal}", solution.weight);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn lift(a: LiftArgs) -> Res<()> {
    let original = load(&a.original, a.format)?.graph;
    let trace = load_trace(&a.trace)?;
    let (compact_sol, header) = parse_solution(&read(&a.kernel_solution)?)
        .map_err(|e| usage(format!("{}: {e}", a.kernel_solution.display())))?;
    let lifted = match &a.kernel {
        Some(kp) => {
            let (kernel, mapping) = load_kernel(kp, a.mapping.as_deref())?;
            let vertices = translate(&compact_sol, &mapping)?;
            let sol = Solution::new(&kernel, vertices);
            trace.lift_checked(&kernel, &sol, &original).map_err(failed)?
        }
        None => {
            let vertices = match &a.mapping {
                Some(mp) => {
                    let mapping = parse_mapping(&read(mp)?).map_err(|e| usage(format!("{}: {e}", mp.display())))?;
                    translate(&compact_sol, &mapping)?
                }
                None => compact_sol,
            };
            let mut set = vertices;
            trace.lift_range(0, trace.len(), &mut set);
            if let Some(&v) = set.iter().find(|v| !original.is_active(**v)) {
                return Err(failed(format!("lifted set contains unknown vertex {}", v.0 as u64 + 1)));
            }
            if !original.is_independent(&set) {
                return Err(failed("lifted set is not independent in the original graph"));
            }
            let lifted = Solution::new(&original, set);
            if let Some(w) = header {
                if lifted.weight < w + trace.offset() {
                    return Err(failed(format!(
                        "lifted weight {} is below kernel weight + offset = {}",
                        lifted.weight,
                        w + trace.offset()
                    )));
                }
            }
            lifted
        }
    };
    let text = write_solution(&lifted.vertices, lifted.weight);
    match &a.output {
        Some(p) => {
            write(p, &text)?;
            println!("weight {}", lifted.weight);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn translate(compact: &VertexSet, mapping: &[VertexId]) -> Res<VertexSet> {
    compact
        .iter()
        .map(|v| {
            mapping
                .get(v.index())
                .copied()
                .ok_or_else(|| usage(format!("kernel solution vertex {} is not in the kernel", v.0 as u64 + 1)))
        })
        .collect()
}

fn verify(a: VerifyArgs) -> Res<()> {
    let original = load(&a.input, a.format)?.graph;
    let trace = load_trace(&a.trace)?;
    let (kernel, _) = load_kernel(&a.kernel, a.mapping.as_deref())?;
    let config = config(&a.rules, None)?;
    let out = solve_exact(&kernel, &solve_budget(a.time_limit)?);
    if !out.is_optimal() {
        return Err(failed("kernel could not be solved exactly within the budget"));
    }
    let report = verify_kernel(&original, &kernel, &trace, out.solution(), &config).map_err(usage)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.passed() {
        Ok(())
    } else {
        Err(failed(report.errors.join("; ")))
    }
}

fn gen(a: GenArgs) -> Res<()> {
    if !(0.0..=1.0).contains(&a.p) {
        return Err(usage(format!("edge probability {} is outside [0, 1]", a.p)));
    }
    if a.wmin > a.wmax {
        return Err(usage("--wmin exceeds --wmax"));
    }
    let graph = gen_random(a.n, a.p, a.wmin, a.wmax, a.seed);
    let labels = (1..=a.n as u64).collect();
    write(&a.output, &Instance { graph, labels }.write(a.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernelize(a) => kernelize(a),
        Command::Solve(a) => solve(a),
        Command::Lift(a) => lift(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

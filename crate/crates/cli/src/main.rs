//! `slelab` — flows, traces, hulls, exact Virasoro computations, kappa
//! solvers, and statistical law experiments from one binary.
//!
//! Exit codes: 0 success, 1 usage, 2 numerical/domain failure, 3 a
//! requested identity or self-test failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use slelab::bridge::{obstruction_l1, solve_kappa_null, CandidateSpec, Sign};
use slelab::drive::DrivePath;
use slelab::loewner::FlowConfig;
use slelab::rational::{parse_rational, rational_to_string};
use slelab::report::{
    experiment_to_json, hull_to_csv, hull_to_json, null_solution_to_json, parse_complex,
    pbw_from_json, pbw_to_json, trace_to_csv, trace_to_json,
};
use slelab::singular::{find_singular_vectors, gram_matrix, QuotientModule};
use slelab::stochastic::{
    backward_law_experiment, sample_brownian, scale_invariance_experiment,
    stationarity_experiment, Seed,
};
use slelab::trace::{hull_grid, trace_sample, GridSpec};
use slelab::verma::VermaParams;

#[derive(Parser)]
#[command(
    name = "slelab",
    version,
    about = "Loewner flows of the SLE hierarchy and their exact Virasoro counterparts",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the trace curve of a grade-n evolution
    Trace(TraceArgs),
    /// Mark the swallowed region of a grid at a fixed horizon
    Hull(HullArgs),
    /// Exact Verma-module computations
    #[command(subcommand)]
    Virasoro(VirasoroCmd),
    /// Walk-drift to null-vector solvers
    #[command(subcommand)]
    Bridge(BridgeCmd),
    /// Statistical verification of the distributional laws
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Run the acceptance suite and print one line per criterion
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, default_value_t = 1)]
    grade: u32,
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    /// Horizon (a multiple of dt)
    #[arg(long = "T", default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Master seed; required when kappa > 0
    #[arg(long)]
    seed: Option<u64>,
    /// Map relation: 1 forward, 2 backward (two-sided drive)
    #[arg(long, default_value_t = 1)]
    sign: u32,
    /// Explicit sample times "t1,t2,..." (grid multiples); overrides --points
    #[arg(long, allow_hyphen_values = true)]
    times: Option<String>,
    /// Number of evenly spaced sample times when --times is absent
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct HullArgs {
    #[arg(long, default_value_t = 1)]
    grade: u32,
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    #[arg(long, default_value_t = 0.25)]
    t: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Window "re_min,re_max,im_max,nx,ny"
    #[arg(long, default_value = "-1.5,1.5,1.5,60,40", allow_hyphen_values = true)]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Subcommand)]
enum VirasoroCmd {
    /// Singular vectors at a level for numeric (c, delta)
    Singular(SingularArgs),
    /// Gram (Shapovalov) matrix at a level; symbolic when c/delta omitted
    Gram(GramArgs),
    /// Reduce a vector modulo the submodule generated by singular vectors
    Reduce(ReduceArgs),
}

#[derive(Args)]
struct SingularArgs {
    #[arg(long)]
    level: u32,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, allow_hyphen_values = true)]
    delta: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GramArgs {
    #[arg(long)]
    level: u32,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Vector as JSON: {"level": 4, "terms": [{"partition": [4], "coeff": "1"}, ...]}
    #[arg(long)]
    vector: String,
    /// Minimal model "p,p'" (with --module); alternative to --c/--delta
    #[arg(long)]
    model: Option<String>,
    /// Highest-weight labels "r,s" within the minimal model
    #[arg(long)]
    module: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Exit 3 unless the residue is zero
    #[arg(long, default_value_t = false)]
    expect_null: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BridgeCmd {
    /// All rational kappa making the candidate null in a minimal-model module
    SolveKappa(SolveKappaArgs),
    /// The L_1 obstruction coefficients of the grade-n candidate
    Obstruction(ObstructionArgs),
}

#[derive(Args)]
struct SolveKappaArgs {
    #[arg(long)]
    grade: u32,
    #[arg(long)]
    sign: u32,
    /// Minimal model "p,p'"
    #[arg(long)]
    model: String,
    /// Module labels "r,s"
    #[arg(long)]
    module: String,
    /// Comma list of expected non-negative roots; exit 3 on mismatch
    #[arg(long)]
    expect: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ObstructionArgs {
    #[arg(long)]
    grade: u32,
    #[arg(long)]
    sign: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum StatsCmd {
    /// KS test of the rescaling law of the flow
    ScaleInvariance(ScaleArgs),
    /// KS test of the restart (Markov) law
    Stationarity(StationarityArgs),
    /// KS test of the two-sided backward-flow law
    BackwardLaw(BackwardArgs),
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long, default_value_t = 1)]
    grade: u32,
    #[arg(long, default_value_t = 2.0)]
    kappa: f64,
    #[arg(long, default_value_t = 4.0)]
    alpha: f64,
    /// Start point "a+bi" in the open wedge
    #[arg(long, default_value = "0+2i", allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 0.25)]
    t: f64,
    #[arg(long = "N", default_value_t = 2000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StationarityArgs {
    #[arg(long, default_value_t = 1)]
    grade: u32,
    #[arg(long, default_value_t = 2.0)]
    kappa: f64,
    #[arg(long, default_value_t = 0.1)]
    t0: f64,
    #[arg(long, default_value_t = 0.35)]
    t1: f64,
    #[arg(long, default_value = "0+2i", allow_hyphen_values = true)]
    z: String,
    #[arg(long = "N", default_value_t = 2000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BackwardArgs {
    #[arg(long, default_value_t = 1)]
    grade: u32,
    #[arg(long, default_value_t = 2.0)]
    kappa: f64,
    #[arg(long, default_value_t = 0.25)]
    t: f64,
    #[arg(long, default_value = "0+2i", allow_hyphen_values = true)]
    z: String,
    #[arg(long = "N", default_value_t = 2000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Skip the minutes-long statistical-law criterion
    #[arg(long, default_value_t = false)]
    skip_stats: bool,
}

/// Failure modes mapped onto the exit-code contract.
enum CliError {
    Usage(String),
    Numeric(String),
    Identity(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Identity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Identity(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version are not usage errors.
            use clap::error::ErrorKind;
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Trace(args) => cmd_trace(args),
        Command::Hull(args) => cmd_hull(args),
        Command::Virasoro(cmd) => match cmd {
            VirasoroCmd::Singular(args) => cmd_singular(args),
            VirasoroCmd::Gram(args) => cmd_gram(args),
            VirasoroCmd::Reduce(args) => cmd_reduce(args),
        },
        Command::Bridge(cmd) => match cmd {
            BridgeCmd::SolveKappa(args) => cmd_solve_kappa(args),
            BridgeCmd::Obstruction(args) => cmd_obstruction(args),
        },
        Command::Stats(cmd) => match cmd {
            StatsCmd::ScaleInvariance(args) => cmd_scale(args),
            StatsCmd::Stationarity(args) => cmd_stationarity(args),
            StatsCmd::BackwardLaw(args) => cmd_backward(args),
        },
        Command::Selftest(args) => cmd_selftest(args),
    }
}

fn parse_sign(sign: u32) -> Result<Sign, CliError> {
    Sign::from_label(sign).ok_or_else(|| usage("--sign must be 1 or 2"))
}

fn parse_pair(text: &str, what: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(usage(format!("{what} must be \"a,b\", got {text:?}")));
    }
    let a = parts[0].trim().parse().map_err(|_| usage(format!("bad {what}: {text:?}")))?;
    let b = parts[1].trim().parse().map_err(|_| usage(format!("bad {what}: {text:?}")))?;
    Ok((a, b))
}

/// Manifest describing one run, written alongside every output file.
fn manifest(command: &str, seed: Option<u64>, outputs: &[&Path]) -> Value {
    let argv: Vec<String> = std::env::args().collect();
    json!({
        "tool": "slelab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "argv": argv,
        "seed": seed,
        "outputs": outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>(),
    })
}

/// Writes `content` to `path` plus `<path>.manifest.json` next to it.
fn write_output(
    path: &Path,
    content: &str,
    command: &str,
    seed: Option<u64>,
) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(numeric)?;
    let manifest_path = PathBuf::from(format!("{}.manifest.json", path.display()));
    let manifest = manifest(command, seed, &[path]);
    std::fs::write(
        &manifest_path,
        format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap()),
    )
    .map_err(numeric)?;
    Ok(())
}

/// Emits a JSON result: to a file (with manifest sibling) or to stdout
/// with the manifest embedded.
fn emit_json(
    mut value: Value,
    out: Option<&Path>,
    command: &str,
    seed: Option<u64>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let text = format!("{}\n", serde_json::to_string_pretty(&value).unwrap());
            write_output(path, &text, command, seed)
        }
        None => {
            value["manifest"] = manifest(command, seed, &[]);
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
            Ok(())
        }
    }
}

fn build_drive(
    kappa: f64,
    horizon: f64,
    dt: f64,
    seed: Option<u64>,
    two_sided: bool,
) -> Result<(DrivePath, Option<u64>), CliError> {
    if kappa < 0.0 {
        return Err(usage("--kappa must be non-negative"));
    }
    let steps = horizon / dt;
    if (steps - steps.round()).abs() > 1e-6 {
        return Err(CliError::Numeric(format!(
            "horizon {horizon} is not a multiple of dt {dt}"
        )));
    }
    if kappa == 0.0 {
        return Ok((DrivePath::zero(horizon, dt, two_sided), seed));
    }
    let master = seed.ok_or_else(|| usage("--seed is required when kappa > 0"))?;
    Ok((
        sample_brownian(horizon, dt, kappa, Seed::new(master), 0, two_sided),
        Some(master),
    ))
}

fn cmd_trace(args: TraceArgs) -> Result<(), CliError> {
    let sign = parse_sign(args.sign)?;
    if args.grade < 1 || args.horizon <= 0.0 || args.dt <= 0.0 {
        return Err(usage("need grade >= 1, T > 0, dt > 0"));
    }
    let (drive, seed) = build_drive(
        args.kappa,
        args.horizon,
        args.dt,
        args.seed,
        sign == Sign::Backward,
    )?;
    let cfg = FlowConfig::new(args.grade, args.dt).with_sign(sign);
    let times: Vec<f64> = match &args.times {
        Some(list) => list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("bad time {t:?}"))))
            .collect::<Result<_, _>>()?,
        None => {
            let steps = (args.horizon / args.dt).round() as usize;
            let points = args.points.clamp(1, steps);
            let mut times: Vec<f64> = (0..=points)
                .map(|k| ((k * steps) / points) as f64 * args.dt)
                .collect();
            times.dedup();
            times
        }
    };
    let curve = trace_sample(&drive, &cfg, &times).map_err(numeric)?;
    match args.format.as_str() {
        "csv" => {
            let csv = trace_to_csv(&curve);
            match &args.out {
                Some(path) => write_output(path, &csv, "trace", seed)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        "json" => emit_json(trace_to_json(&curve), args.out.as_deref(), "trace", seed),
        other => Err(usage(format!("unknown format {other:?}"))),
    }
}

fn cmd_hull(args: HullArgs) -> Result<(), CliError> {
    if args.grade < 1 || args.t < 0.0 || args.dt <= 0.0 {
        return Err(usage("need grade >= 1, t >= 0, dt > 0"));
    }
    let parts: Vec<&str> = args.grid.split(',').collect();
    if parts.len() != 5 {
        return Err(usage("--grid must be \"re_min,re_max,im_max,nx,ny\""));
    }
    let nums: Vec<f64> = parts[..3]
        .iter()
        .map(|p| p.trim().parse().map_err(|_| usage("bad --grid number")))
        .collect::<Result<_, _>>()?;
    let nx: usize = parts[3].trim().parse().map_err(|_| usage("bad --grid nx"))?;
    let ny: usize = parts[4].trim().parse().map_err(|_| usage("bad --grid ny"))?;
    let spec = GridSpec::new(nums[0], nums[1], nums[2], nx, ny);
    let horizon = if args.t > 0.0 { args.t } else { args.dt };
    let (drive, seed) = build_drive(args.kappa, horizon, args.dt, args.seed, false)?;
    let cfg = FlowConfig::new(args.grade, args.dt);
    let hull = hull_grid(&drive, &cfg, args.t, &spec).map_err(numeric)?;
    match args.format.as_str() {
        "csv" => {
            let csv = hull_to_csv(&hull);
            match &args.out {
                Some(path) => write_output(path, &csv, "hull", seed)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        "json" => emit_json(hull_to_json(&hull), args.out.as_deref(), "hull", seed),
        other => Err(usage(format!("unknown format {other:?}"))),
    }
}

fn numeric_params(c: &str, delta: &str) -> Result<VermaParams, CliError> {
    let c = parse_rational(c).map_err(usage)?;
    let delta = parse_rational(delta).map_err(usage)?;
    Ok(VermaParams::rational(c, delta))
}

fn cmd_singular(args: SingularArgs) -> Result<(), CliError> {
    if args.level < 1 {
        return Err(usage("--level must be >= 1"));
    }
    let params = numeric_params(&args.c, &args.delta)?;
    let vectors = find_singular_vectors(args.level, &params);
    let value = json!({
        "level": args.level,
        "c": args.c,
        "delta": args.delta,
        "count": vectors.len(),
        "vectors": vectors.iter().map(pbw_to_json).collect::<Vec<_>>(),
    });
    emit_json(value, args.out.as_deref(), "virasoro singular", None)
}

fn cmd_gram(args: GramArgs) -> Result<(), CliError> {
    if args.level < 1 {
        return Err(usage("--level must be >= 1"));
    }
    let params = match (&args.c, &args.delta) {
        (Some(c), Some(delta)) => numeric_params(c, delta)?,
        (None, None) => VermaParams::symbolic(),
        _ => return Err(usage("--c and --delta must be given together")),
    };
    let (basis, matrix) = gram_matrix(args.level, &params);
    let mut value = slelab::report::gram_to_json(&basis, &matrix);
    if let Some(det) = slelab::report::gram_determinant(&matrix) {
        value["determinant"] = json!(det);
    }
    value["level"] = json!(args.level);
    emit_json(value, args.out.as_deref(), "virasoro gram", None)
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    let vector_json: Value =
        serde_json::from_str(&args.vector).map_err(|e| usage(format!("bad --vector: {e}")))?;
    let level = vector_json
        .get("level")
        .and_then(Value::as_u64)
        .ok_or_else(|| usage("--vector needs a 'level' field"))? as u32;
    let module = match (&args.model, &args.module, &args.c, &args.delta) {
        (Some(model), Some(labels), None, None) => {
            let (p, p_prime) = parse_pair(model, "--model")?;
            let (r, s) = parse_pair(labels, "--module")?;
            QuotientModule::minimal_model(p, p_prime, r, s, level).map_err(numeric)?
        }
        (None, None, Some(c), Some(delta)) => {
            QuotientModule::scan(numeric_params(c, delta)?, level)
        }
        _ => {
            return Err(usage(
                "give either --model with --module, or --c with --delta",
            ))
        }
    };
    let vector = pbw_from_json(&vector_json, module.params().clone()).map_err(usage)?;
    let residue = module.reduce(&vector);
    let is_null = residue.is_zero();
    let value = json!({
        "vector": pbw_to_json(&vector),
        "generators": module
            .generators()
            .iter()
            .map(pbw_to_json)
            .collect::<Vec<_>>(),
        "residue": pbw_to_json(&residue),
        "null": is_null,
    });
    emit_json(value, args.out.as_deref(), "virasoro reduce", None)?;
    if args.expect_null && !is_null {
        return Err(CliError::Identity(
            "residue is nonzero but --expect-null was given".into(),
        ));
    }
    Ok(())
}

fn cmd_solve_kappa(args: SolveKappaArgs) -> Result<(), CliError> {
    let sign = parse_sign(args.sign)?;
    let (p, p_prime) = parse_pair(&args.model, "--model")?;
    let (r, s) = parse_pair(&args.module, "--module")?;
    let solution =
        solve_kappa_null(args.grade, sign, p, p_prime, r, s).map_err(numeric)?;
    let value = null_solution_to_json(args.grade, sign, p, p_prime, r, s, &solution);
    let roots: Vec<String> = solution
        .roots
        .iter()
        .filter(|root| root.nonnegative)
        .map(|root| rational_to_string(&root.kappa))
        .collect();
    emit_json(value, args.out.as_deref(), "bridge solve-kappa", None)?;
    if let Some(expect) = &args.expect {
        let expected: Vec<String> = expect
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().to_string())
            .collect();
        if roots != expected {
            return Err(CliError::Identity(format!(
                "expected kappa roots {expected:?}, found {roots:?}"
            )));
        }
    }
    Ok(())
}

fn cmd_obstruction(args: ObstructionArgs) -> Result<(), CliError> {
    let sign = parse_sign(args.sign)?;
    if args.grade < 2 {
        return Err(usage(
            "--grade must be >= 2; grade 1 uses the level-2 singular condition",
        ));
    }
    let spec = CandidateSpec::symbolic(args.grade, sign);
    let params = VermaParams::symbolic();
    let vector = obstruction_l1(&spec, &params);
    let value = json!({
        "grade": args.grade,
        "s": sign.label(),
        "obstruction": pbw_to_json(&vector),
    });
    emit_json(value, args.out.as_deref(), "bridge obstruction", None)
}

fn parse_z(text: &str) -> Result<Complex64, CliError> {
    parse_complex(text).map_err(usage)
}

fn cmd_scale(args: ScaleArgs) -> Result<(), CliError> {
    let z = parse_z(&args.z)?;
    let report = scale_invariance_experiment(
        args.grade,
        args.kappa,
        args.alpha,
        z,
        args.t,
        args.samples,
        Seed::new(args.seed),
        args.dt,
    )
    .map_err(numeric)?;
    emit_json(
        experiment_to_json(&report),
        args.out.as_deref(),
        "stats scale-invariance",
        Some(args.seed),
    )
}

fn cmd_stationarity(args: StationarityArgs) -> Result<(), CliError> {
    if !(args.t1 > args.t0 && args.t0 >= 0.0) {
        return Err(usage("need t1 > t0 >= 0"));
    }
    let z = parse_z(&args.z)?;
    let report = stationarity_experiment(
        args.grade,
        args.kappa,
        args.t0,
        args.t1,
        z,
        args.samples,
        Seed::new(args.seed),
        args.dt,
    )
    .map_err(numeric)?;
    emit_json(
        experiment_to_json(&report),
        args.out.as_deref(),
        "stats stationarity",
        Some(args.seed),
    )
}

fn cmd_backward(args: BackwardArgs) -> Result<(), CliError> {
    let z = parse_z(&args.z)?;
    let report = backward_law_experiment(
        args.grade,
        args.kappa,
        args.t,
        z,
        args.samples,
        Seed::new(args.seed),
        args.dt,
    )
    .map_err(numeric)?;
    emit_json(
        experiment_to_json(&report),
        args.out.as_deref(),
        "stats backward-law",
        Some(args.seed),
    )
}

fn cmd_selftest(args: SelftestArgs) -> Result<(), CliError> {
    let outcomes = slelab::selftest::run_all(!args.skip_stats);
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    if slelab::selftest::all_passed(&outcomes) {
        println!("all {} criteria passed", outcomes.len());
        Ok(())
    } else {
        Err(CliError::Identity(format!(
            "{} criteria failed",
            outcomes.iter().filter(|o| !o.passed).count()
        )))
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 the solver produced an
//! infeasible set, 3 `verify` found violations.

mod bench;
mod report;

pub use bench::{BenchEntry, Manifest};
pub use report::{ExactReport, ExactSummary, InstanceRef, RunReport};

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::algorithms::{self, Algorithm, RunTrace};
use crate::constraints::{CardinalityConstraint, Constraint};
use crate::exact::{brute_force_opt, ratio};
use crate::generators::{tight_example, GeneratorInfo, InstanceFile};
use crate::oracle::{Oracle, ValidationMode};
use crate::{Error, Result};
use report::{load_constraint, load_instance, to_json};

/// Epsilon used when `--epsilon` is absent.
pub const DEFAULT_EPSILON: f64 = 0.1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VIOLATIONS: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "symsub",
    version,
    about = "Symmetric submodular maximization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a solver and write a report.
    Solve(SolveArgs),
    /// Brute-force optimum (n <= 24).
    Exact(ExactArgs),
    /// Check non-negativity, symmetry and submodularity of an instance.
    Verify(VerifyArgs),
    /// Run a manifest of solver runs and write CSV.
    Bench(BenchArgs),
    /// Write the greedy worst-case instance and its optimum sidecar.
    TightExample(TightArgs),
}

#[derive(Debug, Args)]
struct ConstraintArgs {
    /// Constraint file.
    #[arg(long, required_unless_present = "k")]
    constraint: Option<PathBuf>,
    /// Cardinality bound, shorthand for a cardinality constraint file.
    #[arg(long, conflicts_with = "constraint")]
    k: Option<usize>,
}

impl ConstraintArgs {
    fn load(&self) -> Result<Constraint> {
        match (&self.constraint, self.k) {
            (Some(path), _) => load_constraint(path),
            (None, Some(k)) => Ok(CardinalityConstraint::new(k)?.into()),
            (None, None) => Err(Error::InvalidArgument("pass --constraint or --k".into())),
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    constraint: ConstraintArgs,
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include per-round records.
    #[arg(long)]
    trace: bool,
    /// Also compute the brute-force optimum and the ratio.
    #[arg(long)]
    exact: bool,
    /// Explicit lambda for mw-packing.
    #[arg(long)]
    lambda_override: Option<f64>,
    /// Record wall-clock duration (makes the report run-dependent).
    #[arg(long)]
    timing: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    constraint: ConstraintArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Check every triple instead of sampling (n <= 20).
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TightArgs {
    #[arg(long)]
    k: usize,
    /// Instance path; the sidecar goes to `<stem>.opt.json` beside it.
    #[arg(long)]
    out: PathBuf,
}

/// Options shared by `solve` and `bench`.
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub lambda_override: Option<f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::TightExample(args) => cmd_tight_example(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => EXIT_INFEASIBLE,
                _ => EXIT_INPUT,
            }
        }
    }
}

/// Dispatches `algorithm` on `constraint`, rejecting incompatible pairs.
pub fn run_algorithm(
    oracle: &Oracle,
    constraint: &Constraint,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> Result<RunTrace> {
    constraint.check_ground(oracle.n())?;
    if options.lambda_override.is_some() && algorithm != Algorithm::MwPacking {
        return Err(Error::InvalidArgument(
            "--lambda-override only applies to mw-packing".into(),
        ));
    }
    let epsilon = options.epsilon.unwrap_or(DEFAULT_EPSILON);
    let mismatch = || {
        let needs = match algorithm {
            Algorithm::GreedyCard | Algorithm::SampleGreedyCard => "a cardinality",
            Algorithm::GreedyMatroid => "a matroid",
            Algorithm::MwPacking => "a packing or knapsack",
            Algorithm::KnapsackEnum => "a knapsack",
        };
        Err(Error::InvalidArgument(format!(
            "{algorithm} requires {needs} constraint"
        )))
    };
    match (algorithm, constraint) {
        (Algorithm::GreedyCard, Constraint::Cardinality(c)) => {
            algorithms::greedy_cardinality(oracle, c.k())
        }
        (Algorithm::SampleGreedyCard, Constraint::Cardinality(c)) => {
            algorithms::sample_greedy_cardinality(oracle, c.k(), epsilon, options.seed)
        }
        (Algorithm::GreedyMatroid, Constraint::Matroid(m)) => {
            algorithms::greedy_matroid(oracle, m, epsilon)
        }
        (Algorithm::MwPacking, Constraint::Packing(p)) => {
            algorithms::mw_packing_with_lambda(oracle, p, epsilon, options.lambda_override)
        }
        (Algorithm::MwPacking, Constraint::Knapsack(k)) => {
            let p = k.to_packing().ok_or_else(|| {
                Error::InvalidArgument(
                    "knapsack has no element with positive weight within the budget".into(),
                )
            })?;
            algorithms::mw_packing_with_lambda(oracle, &p, epsilon, options.lambda_override)
        }
        (Algorithm::KnapsackEnum, Constraint::Knapsack(k)) => {
            algorithms::knapsack_enum(oracle, k, options.epsilon)
        }
        _ => mismatch(),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let (instance, reference) = load_instance(&args.instance)?;
    let constraint = args.constraint.load()?;
    let oracle = Oracle::new(instance);
    let options = SolveOptions {
        epsilon: args.epsilon,
        seed: args.seed,
        lambda_override: args.lambda_override,
    };
    let started = Instant::now();
    let trace = run_algorithm(&oracle, &constraint, args.algorithm, &options)?;
    let elapsed = started.elapsed();
    let feasible = constraint.is_feasible(&trace.final_set)?;

    let exact = if args.exact {
        let result = brute_force_opt(oracle.instance(), &constraint)?;
        Some(ExactSummary {
            ratio: ratio(&trace, &result),
            opt_value: result.opt_value,
            witness: result.witness,
        })
    } else {
        None
    };
    let mut report = RunReport::new(reference, constraint, trace, args.trace);
    report.exact = exact;
    if args.timing {
        report.duration_ms = Some(elapsed.as_secs_f64() * 1e3);
    }
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    if !feasible {
        eprintln!(
            "error: solver returned an infeasible set {:?}",
            report.final_set
        );
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn cmd_exact(args: ExactArgs) -> Result<i32> {
    let (instance, reference) = load_instance(&args.instance)?;
    let constraint = args.constraint.load()?;
    let result = brute_force_opt(&instance, &constraint)?;
    let report = ExactReport {
        instance: reference,
        constraint,
        result,
    };
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let (instance, _) = load_instance(&args.instance)?;
    let mode = if args.exhaustive {
        ValidationMode::Exhaustive
    } else {
        ValidationMode::Sampled {
            trials: args.trials,
            seed: args.seed,
        }
    };
    let report = Oracle::new(instance).validate(mode)?;
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    if report.valid {
        Ok(EXIT_OK)
    } else {
        eprintln!("{} violation(s) found", report.violations.len());
        Ok(EXIT_VIOLATIONS)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let csv = bench::run_manifest(&args.manifest)?;
    write_output(args.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn cmd_tight_example(args: TightArgs) -> Result<i32> {
    let example = tight_example(args.k)?;
    let certificate = example.certificate()?;
    let file = InstanceFile {
        instance: example.graph.into(),
        generator: Some(GeneratorInfo {
            name: "tight-example".into(),
            prng: None,
            seed: None,
            params: serde_json::json!({ "k": example.k, "c": example.c }),
        }),
    };
    fs::write(&args.out, to_json(&file)?)?;
    fs::write(sidecar_path(&args.out), to_json(&certificate)?)?;
    Ok(EXIT_OK)
}

/// `dir/name.json` maps to `dir/name.opt.json`.
pub fn sidecar_path(instance: &Path) -> PathBuf {
    let stem = instance
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    instance.with_file_name(format!("{stem}.opt.json"))
}

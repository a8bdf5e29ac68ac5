//! `urnmix` — verification suites for the Bernoulli–Laplace urn's
//! convergence to equilibrium.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed,
//! 2 usage/configuration error, 3 numeric-integrity failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use urnmix::harness::{
    run_asymptotics_suite, run_couplings_suite, run_moments_suite, run_profile_suite,
    run_verify_all, write_report, ExperimentConfig, OutputFormat, Suite, SuiteOutcome, ThetaGrid,
};
use urnmix::limits::{Regime, TimeForm};
use urnmix::Error;

#[derive(Parser)]
#[command(
    name = "urnmix",
    about = "Exact, closed-form and simulation-based convergence checks for the Bernoulli-Laplace urn",
    version
)]
struct Cli {
    /// JSON configuration file; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact-vs-limit cutoff profile curves over an n-ladder.
    Profile(RunArgs),
    /// Transient moments, stationarity and rate-identity exactness checks.
    Moments(RunArgs),
    /// Coupling order/coalescence statistics and sampler validation.
    Couplings(RunArgs),
    /// Finite-n discrepancies of the OU, Gaussian, M/M/∞ and Gumbel
    /// approximations.
    Asymptotics(RunArgs),
    /// Every suite on its contract grid; exit 0 iff all checks pass.
    Verify(RunArgs),
}

impl Command {
    fn suite(&self) -> Suite {
        match self {
            Command::Profile(_) => Suite::Profile,
            Command::Moments(_) => Suite::Moments,
            Command::Couplings(_) => Suite::Couplings,
            Command::Asymptotics(_) => Suite::Asymptotics,
            Command::Verify(_) => Suite::All,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Profile(a)
            | Command::Moments(a)
            | Command::Couplings(a)
            | Command::Asymptotics(a)
            | Command::Verify(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Population size; repeat the flag for a ladder.
    #[arg(long = "n", value_name = "N")]
    n: Vec<u64>,

    /// Red-ball count per ladder entry (defaults to the regime rule).
    #[arg(long = "k", value_name = "K")]
    k: Vec<u64>,

    /// Target regime: large | critical | small.
    #[arg(long, value_name = "REGIME")]
    regime: Option<String>,

    /// Limit of k²/n for the critical regime.
    #[arg(long, value_name = "ALPHA")]
    alpha: Option<f64>,

    #[arg(long, value_name = "THETA")]
    theta_min: Option<f64>,

    #[arg(long, value_name = "THETA")]
    theta_max: Option<f64>,

    #[arg(long, value_name = "COUNT")]
    theta_steps: Option<usize>,

    /// Base seed for every random stream in the run.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Trajectory count for coupled-pair and path statistics.
    #[arg(long, value_name = "COUNT")]
    samples: Option<u64>,

    /// Sample count for the Kolmogorov-Smirnov checks.
    #[arg(long, value_name = "COUNT")]
    ks_samples: Option<u64>,

    /// Report file destination.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report format: csv | json.
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,
}

fn base_config(suite: Suite, file: Option<&PathBuf>) -> Result<ExperimentConfig, Error> {
    let mut cfg = match file {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.suite = suite;
    Ok(cfg)
}

fn apply_overrides(mut cfg: ExperimentConfig, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    if let Some(name) = &args.regime {
        cfg.regime = match name.as_str() {
            "large" => Regime::Large,
            "critical" => Regime::critical(args.alpha.unwrap_or(1.0), TimeForm::HalfLogK)?,
            "small" => Regime::Small,
            other => {
                return Err(Error::Contract(format!(
                    "unknown regime '{other}' (expected large | critical | small)"
                )))
            }
        };
        // Fresh regime means the config file's ladder rule may no longer
        // apply; only keep an explicit ladder from the CLI.
        if args.n.is_empty() {
            cfg.n_ladder = match cfg.regime {
                Regime::Large => vec![512, 2048, 8192],
                _ => vec![10_000, 100_000, 1_000_000],
            };
            cfg.k_ladder = None;
        }
    } else if let Some(alpha) = args.alpha {
        if let Regime::Critical { time_form, .. } = cfg.regime {
            cfg.regime = Regime::critical(alpha, time_form)?;
        } else {
            return Err(Error::Contract(
                "--alpha only applies to the critical regime".into(),
            ));
        }
    }
    if !args.n.is_empty() {
        cfg.n_ladder = args.n.clone();
        cfg.k_ladder = None;
    }
    if !args.k.is_empty() {
        cfg.k_ladder = Some(args.k.clone());
    }
    if args.theta_min.is_some() || args.theta_max.is_some() || args.theta_steps.is_some() {
        let current = cfg.theta_grid.points();
        let min = args.theta_min.unwrap_or_else(|| current[0]);
        let max = args
            .theta_max
            .unwrap_or_else(|| *current.last().expect("non-empty grid"));
        let steps = args.theta_steps.unwrap_or(current.len());
        cfg.theta_grid = ThetaGrid::Linear { min, max, steps };
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = args.samples {
        cfg.samples = samples;
    }
    if let Some(ks) = args.ks_samples {
        cfg.ks_samples = ks;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    if let Some(format) = &args.format {
        cfg.format = match format.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                return Err(Error::Contract(format!(
                    "unknown format '{other}' (expected csv | json)"
                )))
            }
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &ExperimentConfig) -> Result<SuiteOutcome, Error> {
    match cfg.suite {
        Suite::Profile => run_profile_suite(cfg),
        Suite::Moments => run_moments_suite(cfg),
        Suite::Couplings => run_couplings_suite(cfg),
        Suite::Asymptotics => run_asymptotics_suite(cfg),
        Suite::All => run_verify_all(cfg),
    }
}

fn print_outcome(cfg: &ExperimentConfig, outcome: &SuiteOutcome) {
    println!("== effective configuration ==");
    println!("{}", cfg.canonical_json());
    println!("== checks ==");
    let mut points = 0usize;
    for row in &outcome.rows {
        if row.label.starts_with("profile-point") {
            points += 1;
            continue;
        }
        println!(
            "[{}] {} | {} | n={} k={} value={:.6e} tolerance={:.6e}",
            if row.passed { "PASS" } else { "FAIL" },
            row.suite,
            row.label,
            row.n,
            row.k,
            row.value,
            row.tolerance,
        );
    }
    if points > 0 {
        println!("({points} profile points recorded)");
    }
    let failed = outcome.rows.iter().filter(|r| !r.passed).count();
    println!(
        "summary: {} rows, {} failed -> {}",
        outcome.rows.len(),
        failed,
        if outcome.passed { "PASS" } else { "FAIL" }
    );
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NumericIntegrity(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let suite = cli.command.suite();
    let cfg = match base_config(suite, cli.config.as_ref())
        .and_then(|cfg| apply_overrides(cfg, cli.command.args()))
    {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code_for(&err));
        }
    };

    let started = std::time::Instant::now();
    let outcome = match run(&cfg) {
        Ok(outcome) => outcome,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code_for(&err));
        }
    };

    if let Some(path) = &cfg.output {
        if let Err(err) = write_report(&outcome.rows, cfg.format, path) {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code_for(&err));
        }
    }
    print_outcome(&cfg, &outcome);
    eprintln!("wall time: {:.1}s", started.elapsed().as_secs_f64());

    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqms_lab::commands;
use cqms_lab::config::ExperimentConfig;
use cqms_lab::report::Report;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "cqms-lab",
    version,
    about = "Growth, seminorm, dimension, and entropy experiments on group algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ball growth counts and growth-type fits
    Growth(RunArgs),
    /// Exact Leibniz expansion of iterated commutators
    Leibniz(RunArgs),
    /// Certified seminorm bounds on random elements
    Seminorm(RunArgs),
    /// Metric-dimension slopes along a tolerance grid
    Mdim(RunArgs),
    /// Product-set entropy traces and certificates
    Entropy(RunArgs),
    /// Witness search for hyperbolic lattice maps
    Hyperbolic(RunArgs),
    /// Lipschitz constants and the unipotent length bound
    Lipschitz(RunArgs),
    /// Every section present in the config, in a fixed order
    Suite(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override the seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Directory to write report files into
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of the written report files
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
}

#[derive(Copy, Clone, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> cqms_core::Result<bool> {
    let (name, args): (&str, &RunArgs) = match &cli.command {
        Command::Growth(a) => ("growth", a),
        Command::Leibniz(a) => ("leibniz", a),
        Command::Seminorm(a) => ("seminorm", a),
        Command::Mdim(a) => ("mdim", a),
        Command::Entropy(a) => ("entropy", a),
        Command::Hyperbolic(a) => ("hyperbolic", a),
        Command::Lipschitz(a) => ("lipschitz", a),
        Command::Suite(a) => ("suite", a),
    };
    let cfg = ExperimentConfig::from_path(&args.config)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let cache_dir = cfg.cache_dir.as_deref();

    let started = Instant::now();
    let reports: Vec<Report> = match name {
        "suite" => commands::run_suite(&cfg, seed, cache_dir)?,
        "growth" => vec![commands::growth::run(section(&cfg.growth, "growth")?, seed, cache_dir)?],
        "leibniz" => vec![commands::leibniz::run(
            section(&cfg.leibniz, "leibniz")?,
            seed,
            cache_dir,
        )?],
        "seminorm" => vec![commands::seminorm::run(
            section(&cfg.seminorm, "seminorm")?,
            seed,
            cache_dir,
        )?],
        "mdim" => vec![commands::mdim::run(section(&cfg.mdim, "mdim")?, seed, cache_dir)?],
        "entropy" => vec![commands::entropy::run(
            section(&cfg.entropy, "entropy")?,
            seed,
            cache_dir,
        )?],
        "hyperbolic" => vec![commands::hyperbolic::run(
            section(&cfg.hyperbolic, "hyperbolic")?,
            seed,
            cache_dir,
        )?],
        "lipschitz" => vec![commands::lipschitz::run(
            section(&cfg.lipschitz, "lipschitz")?,
            seed,
            cache_dir,
        )?],
        _ => unreachable!("subcommands are exhaustive"),
    };
    // Timing goes to stderr only; report bytes stay seed-determined.
    eprintln!("{name} finished in {:.1}s", started.elapsed().as_secs_f64());

    let mut all_pass = true;
    let stdout = std::io::stdout();
    for report in &reports {
        report.print_verdicts(stdout.lock())?;
        all_pass &= report.pass;
        if let Some(dir) = &args.out {
            match args.emit {
                Emit::Json => report.write_json(&dir.join(format!("{}.json", report.command)))?,
                Emit::Csv => report.write_csv(&dir.join(format!("{}.csv", report.command)))?,
            }
        }
    }
    Ok(all_pass)
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> cqms_core::Result<&'a T> {
    s.as_ref().ok_or_else(|| {
        cqms_core::Error::InvalidParameter(format!("config has no {name} section"))
    })
}

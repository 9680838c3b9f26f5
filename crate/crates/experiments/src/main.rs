use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diolab_experiments::{run, ExpError, Experiment, ExperimentConfig};

/// Seeded Diophantine and homogeneous-dynamics experiments.
#[derive(Parser)]
#[command(name = "diolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pattern containment in continued fractions of fractal samples.
    CantorPatterns(RunArgs),
    /// Records of windowed tail maxima of CF(n^2 x mod 1).
    Boshernitzan(RunArgs),
    /// Dirichlet, Cassels and Littlewood scans over points of the 2-torus.
    DiCensus(RunArgs),
    /// Time fraction with short lattice vectors along the diagonal flow.
    EscapeMass(RunArgs),
    /// First returns to the modular-surface section against the Gauss map.
    GaussCheck(RunArgs),
    /// Raw systole trace of one lattice orbit.
    Systole(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report.json and traces.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; all cores by default.
    #[arg(long)]
    jobs: Option<usize>,
}

fn execute(experiment: Experiment, args: &RunArgs) -> Result<(), ExpError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| ExpError::Config(format!("{}: {e}", args.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(experiment, &text)?;
    if let Some(seed) = args.seed {
        cfg.set_seed(seed);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| ExpError::Config(e.to_string()))?;
    let outcome = pool.install(|| run(&cfg))?;
    outcome.write(&args.out)?;
    eprintln!(
        "{experiment}: {} records, {} failures, report in {}",
        outcome.report.records.len(),
        outcome.report.failures.count,
        args.out.join("report.json").display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match &cli.command {
        Command::CantorPatterns(a) => (Experiment::CantorPatterns, a),
        Command::Boshernitzan(a) => (Experiment::Boshernitzan, a),
        Command::DiCensus(a) => (Experiment::DiCensus, a),
        Command::EscapeMass(a) => (Experiment::EscapeMass, a),
        Command::GaussCheck(a) => (Experiment::GaussCheck, a),
        Command::Systole(a) => (Experiment::Systole, a),
    };
    match execute(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use knlab::toponogov::cone_half_angle;
use knlab_cli::config::{Experiment, ExperimentConfig};
use knlab_cli::CliError;

/// Numerical laboratory for Kakeya-Nikodym norms of Laplace eigenfunctions.
#[derive(Debug, Parser)]
#[command(name = "knlab", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// kn-scaling, restriction-scaling, gram-window, toponogov-cone,
    /// deck-counts, escape-times, nodal-suite or saturation-contrast.
    experiment: Option<String>,

    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Overrides the experiment named positionally or in the config.
    #[arg(long = "experiment")]
    experiment_flag: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,

    /// Comma-separated grid replacing `lambda_grid`.
    #[arg(long)]
    lambda_grid: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prints the cone aperture θ_T for each (T, R).
    ConeTable {
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        r: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
}

fn cone_table(t: &[f64], r: &[f64], kappa: f64) -> Result<(), CliError> {
    println!("{:>8} {:>8} {:>24} {:>24}", "T", "R", "theta_T", "2 asin(R/2T)");
    for &ti in t {
        for &ri in r {
            let theta = cone_half_angle(ti, ri, kappa)?;
            let flat = cone_half_angle(ti, ri, 0.0)?;
            println!("{ti:>8} {ri:>8} {theta:>24.17e} {flat:>24.17e}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(Command::ConeTable { t, r, kappa }) = cli.command {
        return cone_table(&t, &r, kappa);
    }
    let named = cli.experiment_flag.or(cli.experiment).map(|s| s.parse::<Experiment>()).transpose()?;
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path, named)?,
        None => ExperimentConfig::defaults(
            named.ok_or_else(|| CliError::Config("name an experiment or pass --config".into()))?,
        ),
    };
    if let Some(grid) = &cli.lambda_grid {
        config.set("lambda_grid", grid)?;
    }
    if let Some(out) = cli.out {
        config.out = out;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let written = pool.install(|| knlab_cli::execute(&config))?;
    for path in [&written.csv, &written.svg, &written.summary] {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("knlab: {e}");
            ExitCode::FAILURE
        }
    }
}

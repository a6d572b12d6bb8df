//! phasegrid: Zak transforms, sampling-theorem reconstruction, coherent-state
//! lattices and Wigner distributions on finite periodic grids.
//!
//! Exit codes: 0 success, 1 usage / I/O / config error, 2 verification
//! failure (a residual exceeded its tolerance, or a bandwidth refused), so CI
//! can consume the tool directly.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "phasegrid",
    version,
    about = "Phase-space analysis on finite periodic grids"
)]
struct Cli {
    /// Run configuration, JSON or TOML (by extension).
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides the config's `out_dir` (default ".").
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for every random choice in the run (required: runs are
    /// reproducible by construction).
    #[arg(long)]
    seed: u64,

    /// Override every verification tolerance at once.
    #[arg(long)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Zak transforms in both conventions, zero report, quasi-periodicity.
    Zak,
    /// Band projection, sampling, sinc and Cauchy reconstruction, residuals.
    Sample,
    /// Coherent-state lattice: totality, orthonormality, Gram/frame report,
    /// optional projected reconstruction of the configured signal.
    Lattice,
    /// Wigner distribution, marginal checks, optional smoothed-comb report.
    Wigner,
    /// Poisson summation residual at random rectangle points.
    Poisson,
}

fn run(cli: &Cli) -> Result<bool> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(tol) = cli.tol {
        cfg.tolerances.override_all(tol);
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match cli.command {
        Command::Zak => commands::cmd_zak(&cfg, &out, cli.seed, &mut rng),
        Command::Sample => commands::cmd_sample(&cfg, &out, cli.seed, &mut rng),
        Command::Lattice => commands::cmd_lattice(&cfg, &out, cli.seed, &mut rng),
        Command::Wigner => commands::cmd_wigner(&cfg, &out, cli.seed, &mut rng),
        Command::Poisson => commands::cmd_poisson(&cfg, &out, cli.seed, &mut rng),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed: a residual exceeded its tolerance (see report)");
            ExitCode::from(2)
        }
        Err(err) => {
            // refusing to alias is a verification outcome, not a usage error
            if matches!(
                err.downcast_ref::<phasegrid::Error>(),
                Some(phasegrid::Error::BandwidthTooLarge { .. })
            ) {
                eprintln!("verification failed: {err}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        }
    }
}

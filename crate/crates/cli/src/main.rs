//! `pscrd`: run, sweep, attack, and verify PSCRD simulation experiments.
//!
//! Exit codes: 0 on success, 1 when a run fails or an acceptance criterion
//! is red, 2 on usage or config errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pscrd_cli::acceptance::{self, AcceptanceContext};
use pscrd_cli::config::{parse_config, ConfigError};
use pscrd_cli::runner;

#[derive(Parser)]
#[command(
    name = "pscrd",
    version,
    about = "Multi-bridge coordination and reward-distribution protocol simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to a scenario config (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write manifest, CSV, event log, and charts.
    Run {
        #[command(flatten)]
        config: ConfigArg,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep decay factors and grace windows over seed replicates.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// Decay factors, comma separated (e.g. 0.01,0.05,0.1).
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        /// Grace windows in hours, comma separated (e.g. 1,5,10).
        #[arg(long, value_delimiter = ',', required = true)]
        windows: Vec<f64>,
        /// Number of seed replicates per cell.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run coalition-attack experiments for one or more attacker counts.
    Attack {
        #[command(flatten)]
        config: ConfigArg,
        /// Attacker counts, comma separated (e.g. 5,26).
        #[arg(long, value_delimiter = ',', required = true)]
        attackers: Vec<usize>,
        /// Number of seed replicates per count.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Run the attack on the config as-is instead of the flat-cohort
        /// security-analysis variant.
        #[arg(long)]
        keep_groups: bool,
    },
    /// Evaluate every acceptance criterion and print one line per result.
    Verify {
        #[command(flatten)]
        config: ConfigArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(AppError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(AppError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

enum AppError {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e)
    }
}

impl From<runner::RunnerError> for AppError {
    fn from(e: runner::RunnerError) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Run { config, seed, out } => {
            let mut cfg = parse_config(&config.config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let artifacts = runner::execute_run(&cfg, &out)?;
            println!("wrote {}", artifacts.dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            lambdas,
            windows,
            seeds,
            out,
        } => {
            let cfg = parse_config(&config.config)?;
            let index = runner::execute_sweep(&cfg, &lambdas, &windows, seeds, &out)?;
            println!("wrote {}", index.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Attack {
            config,
            attackers,
            seeds,
            out,
            keep_groups,
        } => {
            let cfg = parse_config(&config.config)?;
            let base = if keep_groups {
                cfg
            } else {
                acceptance::attack_base(&cfg)
            };
            let (summary_path, summaries) =
                runner::execute_attack(&base, &attackers, seeds, &out)?;
            println!(
                "{:>9} {:>12} {:>14} {:>12} {:>12} {:>10}",
                "attackers", "sp_raw", "sp_decayed", "share", "captured", "exact_p"
            );
            for s in &summaries {
                println!(
                    "{:>9} {:>12.2} {:>14.2} {:>12.4} {:>12.4} {:>10.4}",
                    s.attackers,
                    s.mean_points_raw,
                    s.mean_points_decayed,
                    s.mean_reward_share,
                    s.mean_capture_frequency,
                    s.exact_capture_probability
                );
            }
            println!("wrote {}", summary_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config } => {
            let cfg = parse_config(&config.config)?;
            let ctx = AcceptanceContext::build(&cfg).map_err(|e| {
                AppError::Config(ConfigError::Validation {
                    path: config.config.clone(),
                    message: e.to_string(),
                })
            })?;
            let mut all_passed = true;
            println!("id   status criterion");
            for criterion in acceptance::registry() {
                let outcome = (criterion.run)(&ctx);
                all_passed &= outcome.passed;
                println!(
                    "{:<4} {:<6} {} — {}",
                    outcome.id,
                    if outcome.passed { "PASS" } else { "FAIL" },
                    outcome.name,
                    outcome.details
                );
            }
            if all_passed {
                println!("all criteria passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("one or more criteria failed");
                Ok(ExitCode::from(1))
            }
        }
    }
}

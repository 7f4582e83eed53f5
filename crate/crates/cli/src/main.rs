//! Batch front-end for the decoherence library.
//!
//! Exit codes: 0 success, 1 config or input error, 2 quadrature did not
//! converge, 3 a check failed.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{load_config, load_slit_config};
use crate::error::CliError;

const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "softdeco", version, about = "Soft-photon decoherence of a charged interferometer")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the decoherence functionals for one configuration (JSON).
    Gamma {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and write a CSV table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant suite and print a pass/fail table.
    Check {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Run only the named checks (repeatable).
        #[arg(long = "only", value_name = "ID")]
        only: Vec<String>,
        /// Negative control: contract with a Euclidean metric.
        #[arg(long, hide = true)]
        inject_metric_fault: bool,
    },
    /// Table-top estimators for a slit and a particle near a mirror (JSON).
    EstimateSlit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Gamma { config, out } => {
            let config = load_config(&config)?;
            let outcome = commands::gamma(&config)?;
            let text = serde_json::to_string_pretty(&outcome.document).expect("document serializes") + "\n";
            commands::write_output(&text, out.as_deref())?;
            if outcome.converged {
                Ok(0)
            } else {
                eprintln!("warning: quadrature did not reach the requested tolerance");
                Ok(EXIT_NOT_CONVERGED)
            }
        }
        Command::Sweep { config, out } => {
            let config = load_config(&config)?;
            let outcome = commands::sweep(&config)?;
            commands::write_output(&outcome.csv, Some(&out))?;
            if outcome.all_ok {
                Ok(0)
            } else {
                eprintln!("warning: some sweep rows did not finish with status ok");
                Ok(EXIT_NOT_CONVERGED)
            }
        }
        Command::Check {
            config,
            only,
            inject_metric_fault,
        } => {
            let config = config.as_deref().map(load_config).transpose()?;
            let outcomes = commands::check(cli.seed, config.as_ref(), &only, inject_metric_fault)?;
            for o in &outcomes {
                println!("{}", o.line());
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} checks, {failed} failed", outcomes.len());
            Ok(if failed == 0 { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::EstimateSlit { config, out } => {
            let config = load_slit_config(&config)?;
            let doc = commands::estimate_slit(&config)?;
            let text = serde_json::to_string_pretty(&doc).expect("document serializes") + "\n";
            commands::write_output(&text, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use bap_cli::{cmd_avg, cmd_experiment, cmd_gen, cmd_solve, cmd_verify, CliError};
use bap_cli::{AvgArgs, ExperimentArgs, GenArgs, SolveArgs, VerifyArgs};
use clap::{Parser, Subcommand};

/// Bilinear assignment problem toolkit.
///
/// Set BAP_THREADS to cap the number of worker threads.
#[derive(Parser)]
#[command(name = "bap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded random instances.
    Gen(GenArgs),
    /// Run one algorithm on one instance and print a result row.
    Solve(SolveArgs),
    /// Run an experiment grid from a TOML configuration.
    Experiment(ExperimentArgs),
    /// Recompute a solution's value and check it against the average bounds.
    Verify(VerifyArgs),
    /// Print the exact average objective value.
    Avg(AvgArgs),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BAP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| CliError::Usage(format!("BAP_THREADS must be a positive integer, got '{raw}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Gen(a) => cmd_gen(&a, &mut out).map(drop),
        Command::Solve(a) => cmd_solve(&a, &mut out).map(drop),
        Command::Experiment(a) => cmd_experiment(&a, &mut out).map(drop),
        Command::Verify(a) => cmd_verify(&a, &mut out).map(drop),
        Command::Avg(a) => cmd_avg(&a, &mut out).map(drop),
    }?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

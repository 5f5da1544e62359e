//! Batch front-end for the `bap` solver: instance generation, single runs,
//! experiment grids with CSV output, and verification.

pub mod commands;
pub mod config;
pub mod error;
pub mod rows;
pub mod solution_file;

pub use commands::{
    cmd_avg, cmd_experiment, cmd_gen, cmd_solve, cmd_verify, run_experiment, run_row, verify_solution, AvgArgs,
    ExperimentArgs, GenArgs, InstanceArg, SolveArgs, VerifyArgs,
};
pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, Result};
pub use rows::{read_results, write_results, ResultRow};

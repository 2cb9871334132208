//! `nevpick` command-line tool: `solve`, `simulate`, `detect-degree`, `reduce`.
//!
//! Every command reads one JSON input and writes its results into the
//! `--output` directory. Each JSON output carries a `config` field and each
//! CSV output starts with a `# config: {...}` line holding the resolved
//! options and the input document.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 when fewer
//! than half of the Monte Carlo runs succeeded (but at least one did),
//! 1 for I/O failures on outputs.

mod commands;
mod output;
pub mod system;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nevpick::SolveOptions;

pub use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "nevpick", version, about = "Degree-constrained Nevanlinna-Pick interpolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an interpolation problem; writes solution.json and trajectory.csv.
    Solve(SolveArgs),
    /// Simulate an ARMA process through a filter bank; writes problem.json and series.csv.
    Simulate(SimulateArgs),
    /// Estimate the positive degree from singular values of P; writes report.json and runs.csv.
    DetectDegree(DetectArgs),
    /// Reduce a solved model to a lower degree; writes reduced_problem.json,
    /// reduced_solution.json and spectra.csv.
    Reduce(ReduceArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SolverFlags {
    /// Band on the first component of G at predicted points.
    #[arg(long, default_value_t = 1e-4)]
    pub mu: f64,
    /// Newton corrector stop (infinity norm of G).
    #[arg(long, default_value_t = 1e-12)]
    pub tol_corrector: f64,
    #[arg(long, default_value_t = 0.1)]
    pub step_init: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub step_min: f64,
}

impl SolverFlags {
    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            mu: self.mu,
            tol_corrector: self.tol_corrector,
            step_init: self.step_init,
            step_min: self.step_min,
            ..SolveOptions::default()
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Io {
    /// Input JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    #[serde(skip)]
    pub output: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SamplingFlags {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Series length after burn-in.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = nevpick::ingestion::DEFAULT_BURN_IN)]
    pub burn_in: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Relative singular-value threshold for the reported degree.
    #[arg(long, default_value_t = nevpick::analysis::DEFAULT_TAU_RANK)]
    pub tau_rank: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantFlag {
    Exact,
    MonteCarlo,
}

impl From<VariantFlag> for nevpick::Variant {
    fn from(v: VariantFlag) -> Self {
        match v {
            VariantFlag::Exact => nevpick::Variant::Exact,
            VariantFlag::MonteCarlo => nevpick::Variant::MonteCarlo,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    #[command(flatten)]
    pub solver: SolverFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingFlags,
    #[arg(long, default_value_t = nevpick::analysis::DEFAULT_TAU_RANK)]
    pub tau_rank: f64,
    /// Monte Carlo repetitions (the exact variant always runs once).
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long, value_enum, default_value_t = VariantFlag::MonteCarlo)]
    pub variant: VariantFlag,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ReduceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Degree of the reduced model.
    #[arg(long)]
    pub target_degree: usize,
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::DetectDegree(a) => commands::detect_degree(a),
        Command::Reduce(a) => commands::reduce(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

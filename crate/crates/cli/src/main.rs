//! `fbma`: solve the Liouville boundary value problem, rebuild minimal
//! immersions, certify orthogonal spheres, and run the diagnostics, from
//! the command line. Artifacts are deterministic CSV/OBJ/JSON files plus a
//! `run.json` manifest recording every tolerance.

mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "fbma", version, about = "free-boundary minimal annulus laboratory")]
struct Cli {
    /// Flat key = value config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve E[R, 0, C0] on the annulus by damped Newton.
    SolveLiouville(commands::SolveArgs),
    /// Reconstruct the immersion from a solution field and decompose it.
    Rebuild(commands::RebuildArgs),
    /// Frenet analysis and the spherical-curve criterion on a curve CSV.
    CertifySphere(commands::CertifyArgs),
    /// Evaluate Weierstrass data into a mesh with period diagnostics.
    WeierstrassEval(commands::WeierstrassArgs),
    /// Hopf, injectivity, and boundary-curvature diagnostics.
    Diagnose(commands::DiagnoseArgs),
    /// End-to-end critical-catenoid regression pipeline.
    PipelineCatenoid(commands::PipelineArgs),
    /// Parameter sweep over (R, C0) pairs with a worker pool.
    Sweep(commands::SweepArgs),
}

/// Failure classes mapped to exit codes: configuration errors exit 2,
/// numerical failures (divergence, refusals) exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl CliError {
    fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    fn numerical(e: impl std::fmt::Display) -> Self {
        CliError::Numerical(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::SolveLiouville(args) => commands::solve_liouville(args, &cfg),
        Command::Rebuild(args) => commands::rebuild(args, &cfg),
        Command::CertifySphere(args) => commands::certify_sphere(args, &cfg),
        Command::WeierstrassEval(args) => commands::weierstrass_eval(args, &cfg),
        Command::Diagnose(args) => commands::diagnose(args, &cfg),
        Command::PipelineCatenoid(args) => commands::pipeline_catenoid(args, &cfg),
        Command::Sweep(args) => commands::sweep(args, &cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Numerical(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

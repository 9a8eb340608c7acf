//! Command-line driver: apply the operator, run the Ginzburg-Landau flow,
//! run the ball exhaustion, verify the whole property suite, or time the
//! operator backends. Every run echoes its fully resolved configuration to
//! `manifest.toml`, and rerunning from a manifest reproduces the outputs
//! bit for bit.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use fraclap_core::FracError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fraclap", version, about = "Discrete fractional Laplacian toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// TOML configuration (a previous run's manifest.toml works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Nodes per axis override.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Operator order override, in (0, 2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Half extent of the centered box.
    #[arg(long)]
    half_extent: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the operator to a field file (spectral on periodic grids,
    /// quadrature on truncated ones; both, with a consistency report, when
    /// the field is periodic).
    Apply {
        #[command(flatten)]
        common: CommonArgs,
        /// Input field file.
        #[arg(long)]
        field: Option<PathBuf>,
        /// Exterior data: "zero" or "constant:<value>".
        #[arg(long)]
        exterior: Option<String>,
        /// Run the three-size spectral/quadrature convergence study.
        #[arg(long)]
        study: bool,
    },
    /// Run the semi-implicit Ginzburg-Landau flow to a steady state.
    Gl {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of field components.
        #[arg(long)]
        components: Option<usize>,
        /// Time step (at most 0.5).
        #[arg(long)]
        time_step: Option<f64>,
        /// Initial field file instead of seeded random data.
        #[arg(long)]
        init_field: Option<PathBuf>,
    },
    /// Solve the exterior-value problems on growing balls and compare the
    /// monotone limit against the Riesz potential.
    Exhaust {
        #[command(flatten)]
        common: CommonArgs,
        /// Ball radii (comma separated).
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Absorption bump height.
        #[arg(long)]
        bump_height: Option<f64>,
    },
    /// Run the full verification suite and exit nonzero if any check fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Feasibility-search restarts.
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Time dense-quadrature and spectral application across grid sizes.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Grid sizes (comma separated).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
}

/// 0 success, 1 numerical failure, 2 validation failure.
pub enum CliError {
    Validation(anyhow::Error),
    Numerical(anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }

    fn message(&self) -> &anyhow::Error {
        match self {
            CliError::Validation(e) | CliError::Numerical(e) => e,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<FracError>() {
            Some(fe) => match fe {
                FracError::NonFinite { .. }
                | FracError::SingularSystem
                | FracError::SolveResidual { .. }
                | FracError::MonotonicityViolation { .. }
                | FracError::SolutionOutOfBounds { .. }
                | FracError::ComparisonViolation { .. }
                | FracError::NotSteady { .. } => CliError::Numerical(e),
                _ => CliError::Validation(e),
            },
            None => CliError::Validation(e),
        }
    }
}

impl From<FracError> for CliError {
    fn from(e: FracError) -> Self {
        CliError::from(anyhow::Error::new(e))
    }
}

/// A check that ran fine but found the numbers wanting.
pub fn numerical_failure(msg: impl Into<String>) -> CliError {
    CliError::Numerical(anyhow::anyhow!(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Apply { common, field, exterior, study } => {
            commands::apply::run(common, field, exterior, study)
        }
        Command::Gl { common, components, time_step, init_field } => {
            commands::gl::run(common, components, time_step, init_field)
        }
        Command::Exhaust { common, radii, bump_height } => {
            commands::exhaust::run(common, radii, bump_height)
        }
        Command::Verify { common, restarts } => commands::verify::run(common, restarts),
        Command::Bench { common, sizes } => commands::bench::run(common, sizes),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

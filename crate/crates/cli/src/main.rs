//! `ubound`: optimal ultimate bound constants, sweeps and experiments.
//!
//! Exit codes: 0 on success, 2 on invalid parameters, 3 on I/O failure.

mod commands;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use range::GridRange;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ubound::Error),
    #[error("invalid argument: {0}")]
    Param(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(ubound::Error::Io(_)) | CliError::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionalArg {
    Velocity,
    Position,
    Energy,
}

impl From<FunctionalArg> for ubound::Functional {
    fn from(f: FunctionalArg) -> Self {
        match f {
            FunctionalArg::Velocity => ubound::Functional::Velocity,
            FunctionalArg::Position => ubound::Functional::Position,
            FunctionalArg::Energy => ubound::Functional::Energy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    B,
    C,
    Dimension,
    Period,
}

#[derive(Debug, Parser)]
#[command(name = "ubound", version, about = "Optimal bounds for u'' + c u' + A u = f")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form constants, regime data and published comparison values.
    Constants {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
    },
    /// CSV table of constants along one axis.
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// Grid `lo:hi:n[:log]`.
        #[arg(long)]
        range: GridRange,
        /// Fixed stiffness when sweeping another axis.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Fixed damping when sweeping another axis.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = FunctionalArg::Velocity)]
        functional: FunctionalArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The n-mode lower-bound construction: report and forcing file.
    Construct {
        #[arg(long)]
        epsilon: f64,
        #[arg(long = "length-l")]
        length_l: f64,
        /// Comma list `4,16,64`, generator `geometric:first:ratio:count`, or a
        /// spectrum file path.
        #[arg(long, conflicts_with = "matrix")]
        modes: Option<String>,
        /// Symmetric matrix file; its eigenvalues become the modes.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        c: f64,
        /// Where to write the forcing signal.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ultimate, global and periodic bounds compared on one scalar problem.
    Equivalence {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long = "period", value_delimiter = ',', required = true)]
        periods: Vec<f64>,
        #[arg(long = "horizon", value_delimiter = ',', required = true)]
        horizons: Vec<f64>,
        #[arg(long, value_enum, default_value_t = FunctionalArg::Velocity)]
        functional: FunctionalArg,
        /// Forcing amplitude; 0 gives the control run.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Machine-readable summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The `(log c)^{1/2}/c` regime on a Weyl-law spectrum.
    LaplacianDemo {
        #[arg(long)]
        dimension: u32,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Number of eigenvalues generated.
        #[arg(long, default_value_t = 10_000)]
        modes: usize,
        /// Damping grid `lo:hi:n[:log]`.
        #[arg(long)]
        range: GridRange,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long = "length-l", default_value_t = 2.0)]
        length_l: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random bounded forcings never beat the optimal constant.
    DualityCheck {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let result = match cli.command {
        Command::Constants { b, c } => commands::constants(b, c),
        Command::Sweep {
            axis,
            range,
            b,
            c,
            functional,
            out,
        } => commands::sweep(axis, &range, b, c, functional, out.as_deref()),
        Command::Construct {
            epsilon,
            length_l,
            modes,
            matrix,
            c,
            out,
        } => commands::construct(epsilon, length_l, modes.as_deref(), matrix.as_deref(), c, out.as_deref()),
        Command::Equivalence {
            b,
            c,
            periods,
            horizons,
            functional,
            amplitude,
            out,
        } => commands::equivalence(b, c, periods, horizons, functional, amplitude, out.as_deref()),
        Command::LaplacianDemo {
            dimension,
            gamma,
            modes,
            range,
            epsilon,
            length_l,
            out,
        } => commands::laplacian_demo(dimension, gamma, modes, &range, epsilon, length_l, out.as_deref()),
        Command::DualityCheck { b, c, seed, count } => commands::duality_check(b, c, seed, count),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Caps the rayon pool at `UBOUND_THREADS` when set.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("UBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Param(format!("UBOUND_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Param(format!("thread pool: {e}")))
}

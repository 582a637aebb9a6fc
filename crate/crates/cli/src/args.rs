use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "spintomo",
    version,
    about = "Spin tomography for two qubits and a spin-3/2 qudit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    #[value(name = "two_qubit")]
    TwoQubit,
    #[value(name = "qudit")]
    Qudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapDirection {
    #[value(name = "qudit-to-2q")]
    QuditTo2q,
    #[value(name = "2q-to-qudit")]
    TwoQToQudit,
    /// qudit -> two-qubit over the whole grid, then back to the qudit target.
    #[value(name = "round-trip")]
    RoundTrip,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Matrix JSON file, `werner:<p>`, `mixed`, or `random` (uses --seed).
    #[arg(long, global = true)]
    pub state: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub rep: Option<Rep>,
    #[arg(long, global = true, default_value_t = 8)]
    pub grid_azimuth: usize,
    #[arg(long, global = true, default_value_t = 8)]
    pub grid_polar: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the command's pass/fail tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

/// Frame point selection. Projections accept `1/2`, `-3/2`, `0.5`, ...
#[derive(Debug, Args, Default)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi2: f64,
}

/// Measurement directions: `x`, `y`, `z`, `-z`, or `kx,ky,kz` (unit norm).
#[derive(Debug, Args)]
pub struct DirectionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check hermiticity, unit trace and positivity.
    Validate,
    /// Tomogram values at a point, all projections at a node, or the full grid.
    Tomogram {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        full_grid: bool,
    },
    /// Reconstruct the state from its grid tomogram.
    Reconstruct,
    /// Map a tomogram between representations through the kernel.
    Map {
        #[arg(long, value_enum, default_value_t = MapDirection::QuditTo2q)]
        direction: MapDirection,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Correlation function in its direct and tomographic forms.
    Correlation {
        #[command(flatten)]
        dirs: DirectionArgs,
    },
    /// Steering inequality and CHSH diagnostics.
    Steering {
        #[command(flatten)]
        dirs: DirectionArgs,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Use a 4x4 grid below the exactness minimum.
        #[arg(long)]
        force_coarse: bool,
    },
}

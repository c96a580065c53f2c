//! Command-line surface. Every parameter struct doubles as the strict schema
//! of the matching scenario `parameters` table.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "hjwave", version, about = "Hamilton-Jacobi wave mechanics scenario runner")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    /// JSON scenario file; command-line flags override its parameters.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,

    /// Output directory for CSV/JSON/binary artifacts. Without it the main
    /// table is printed to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Physical constants and seed; natural units when absent.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommonArgs {
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Speed of light.
    #[arg(long = "c", global = true)]
    pub c: Option<f64>,
    /// Rest mass.
    #[arg(long, global = true)]
    pub m0: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    pub const KEYS: [&'static str; 4] = ["hbar", "c", "m0", "seed"];
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form dispersion table: omega, E, p, phase/group/particle velocity.
    Dispersion(DispersionArgs),
    /// Logarithmic transform of a PDE spec, optionally linearized.
    Transform(TransformArgs),
    /// Time-step a field with leapfrog or Crank-Nicolson.
    Solve(SolveArgs),
    /// Residuals and defect checks of sampled fields.
    Residual(ResidualArgs),
    /// Relativistic Newton trajectory under a preset potential.
    Newton(NewtonArgs),
    /// Nonrelativistic limit sweep over the speed of light.
    LimitStudy(LimitArgs),
    /// Run every acceptance criterion and print a pass/fail table.
    VerifyAll(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dispersion(_) => "dispersion",
            Command::Transform(_) => "transform",
            Command::Solve(_) => "solve",
            Command::Residual(_) => "residual",
            Command::Newton(_) => "newton",
            Command::LimitStudy(_) => "limit-study",
            Command::VerifyAll(_) => "verify-all",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionArgs {
    /// Wavenumber magnitudes, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// Free massive Hamilton-Jacobi equation.
    HjeMassive,
    /// Massless Hamilton-Jacobi equation.
    HjeMassless,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformArgs {
    /// PDE spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Spatial dimensions of a builtin spec (default 3).
    #[arg(long)]
    pub dims: Option<usize>,
    /// Transform constant: "hbar/i", "1" or "[re,im]".
    #[arg(long = "A")]
    #[serde(rename = "A")]
    pub a: Option<String>,
    /// Emit the linear second-order equation instead of the homogeneous form.
    #[arg(long)]
    #[serde(default)]
    pub emit_linear: bool,
    /// Flip the linear equation so its time-time coefficient is positive.
    #[arg(long)]
    #[serde(default)]
    pub sign_normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    /// psi_tt = c^2 lap psi (leapfrog).
    Wave,
    /// psi_tt = c^2 lap psi - (m0 c^2/hbar)^2 psi (leapfrog).
    Relativistic,
    /// Rest-energy factored envelope of the relativistic equation (leapfrog).
    Factored,
    /// Free Schrodinger equation (Crank-Nicolson).
    Schrodinger,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub equation: Option<Equation>,
    /// Initial field in the binary field layout (instead of a plane wave).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Initial time derivative for leapfrog runs from `--input` (default zero).
    #[arg(long)]
    pub rate: Option<PathBuf>,
    /// 1 or 3.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    /// Box length per axis (default 2 pi).
    #[arg(long)]
    pub length: Option<f64>,
    /// Integer plane-wave mode per axis; k = 2 pi mode / length.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mode: Option<Vec<i64>>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// dt as a fraction of the leapfrog stability limit.
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Allow dt beyond the stability limit.
    #[arg(long)]
    #[serde(default)]
    pub no_stability_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Hamilton-Jacobi residual of an action field.
    Hje,
    /// Massless Hamilton-Jacobi residual of an action field.
    HjeMassless,
    /// Momentum and energy eigenvalue defects.
    Eigen,
    /// Second derivatives of ln psi.
    LogCurvature,
    /// Linearized equation applied to psi.
    Linear,
    /// Nonlinear spec applied to psi.
    Nonlinear,
    /// Nonlinear residual versus its linear-plus-log-curvature decomposition.
    Decomposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionArg {
    Full,
    Interior,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualArgs {
    #[arg(long, value_enum)]
    pub check: Option<Check>,
    /// Field time levels in the binary layout, earliest first (repeatable).
    #[arg(long = "field")]
    pub fields: Option<Vec<PathBuf>>,
    /// Spacing of the time levels.
    #[arg(long)]
    pub dt: Option<f64>,
    /// 1 or 3.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    /// Box length per axis (default 2 pi).
    #[arg(long)]
    pub length: Option<f64>,
    /// Integer plane-wave mode per axis; k = 2 pi mode / length.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mode: Option<Vec<i64>>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    #[arg(long = "A")]
    #[serde(rename = "A")]
    pub a: Option<String>,
    /// Momentum for the eigen check (default hbar k of the plane wave).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub momentum: Option<Vec<f64>>,
    /// Energy for the eigen check (default hbar omega of the plane wave).
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[arg(long, value_enum)]
    pub region: Option<RegionArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    Free,
    Linear,
    Harmonic,
    Constant,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonArgs {
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    /// Constant force of the linear potential.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub force: Option<Vec<f64>>,
    /// Spring constant of the harmonic potential.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Value of the constant potential.
    #[arg(long, allow_negative_numbers = true)]
    pub value: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r0: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p0: Option<Vec<f64>>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitArgs {
    #[arg(long)]
    pub k: Option<f64>,
    /// Speeds of light to sweep, ascending.
    #[arg(long, value_delimiter = ',')]
    pub c_values: Option<Vec<f64>>,
    /// Physical evolution time.
    #[arg(long)]
    pub time: Option<f64>,
    /// Grid points of the field-gap runs.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Envelope phase advance per step.
    #[arg(long)]
    pub phase_per_step: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<u8>>,
}

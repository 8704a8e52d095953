use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "zernike",
    version,
    about = "Orbits, flows and Poisson algebra of the generalized Zernike system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a (p_phi, E) point.
    Classify(ClassifyArgs),
    /// Closed-form ellipse constants, period and semi-axes.
    Constants(OrbitCommand),
    /// Closed-form orbit samples (t, x, y, r2, phi).
    Trajectory(TrajectoryArgs),
    /// Numerical flow from the apex with invariant drift.
    Integrate(IntegrateArgs),
    /// Exact checks of the bracket identities.
    VerifyAlgebra(OutputArgs),
    /// Classification over a (p_phi, E) grid.
    Sweep(SweepArgs),
    /// Orbit lifted onto its surface, in a chosen chart.
    Lift(LiftArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rk45,
    Rk4,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub energy: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub pphi: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OrbitCommand {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Number of intervals, giving samples + 1 rows; defaults to 512 per radial period.
    #[arg(long)]
    pub samples: Option<usize>,
    /// End time; defaults to one full revolution, two radial periods.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Number of output intervals; defaults to 512 per radial period.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Rk45)]
    pub method: MethodArg,
    /// RK4 step, or RK45 initial step.
    #[arg(long)]
    pub step: Option<f64>,
    /// RK45 tolerance; falls back to ZERNIKE_TOL, then 1e-10.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Exit with status 1 when any drift exceeds this bound.
    #[arg(long, default_value_t = 1e-8)]
    pub max_drift: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub pmin: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub pmax: f64,
    #[arg(long)]
    pub psteps: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub emin: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub emax: f64,
    #[arg(long)]
    pub esteps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Number of azimuth intervals over a full turn.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Chart for the output (I, II, III, HpI, HpII+, HpII-, HpIII, HI, HII, HIII);
    /// defaults to the pseudo-spherical chart of the surface.
    #[arg(long)]
    pub system: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

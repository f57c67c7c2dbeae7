use std::f64::consts::SQRT_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "resfluor",
    version,
    about = "Photon delay statistics, intensity noise and correlations of a driven two-level atom"
)]
pub struct Cli {
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = "RESFLUOR_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delay density K, survival P, intensity λ and Λ = -ln P on a delay grid.
    DelayCurve(DelayCurveArgs),
    /// Delay moments, Mandel Q, mean intensity and window counting statistics (JSON).
    Stats(StatsArgs),
    /// Intensity noise spectrum Q(ω) and S_I(ω).
    Spectrum(SpectrumArgs),
    /// Normalized photon correlation j(t), optionally with the closed forms.
    Correlation(CorrelationArgs),
    /// Monte-Carlo photon stream plus a summary of empirical vs analytic statistics.
    Simulate(SimulateArgs),
    /// Run the built-in invariant and oracle checks.
    Validate(ValidateArgs),
}

/// Named parameter sets used for the standard figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Ω ∈ {√2, √2/2, 2√2}·γ at resonance.
    OptimalTriplet,
    /// Ω ∈ {2.2, 4.4}·γ at resonance.
    ResonantPair,
    /// (Ω, δ) ∈ {(2.8, -2.2), (4.4, -3.4)}·γ.
    DetunedPair,
}

impl Preset {
    /// `(Ω, δ)` pairs in units of γ.
    pub fn sets(self) -> &'static [(f64, f64)] {
        match self {
            Preset::OptimalTriplet => &[(SQRT_2, 0.0), (SQRT_2 / 2.0, 0.0), (2.0 * SQRT_2, 0.0)],
            Preset::ResonantPair => &[(2.2, 0.0), (4.4, 0.0)],
            Preset::DetunedPair => &[(2.8, -2.2), (4.4, -3.4)],
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DriveArgs {
    /// Coherence decay rate γ (half the Einstein coefficient).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,

    /// Rabi frequency; a comma-separated list gives one output per value.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1.4142135623730951",
        allow_negative_numbers = true,
        conflicts_with = "preset"
    )]
    pub omega: Vec<f64>,

    /// Laser detuning δ = ω_L - ω_A.
    #[arg(
        long,
        default_value_t = 0.0,
        allow_negative_numbers = true,
        conflicts_with = "preset"
    )]
    pub delta: f64,

    /// Named parameter sets, in units of `--gamma`.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file, stdout when absent. Several parameter sets write one
    /// file each, named after this one.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TimeGridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tmin: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub tmax: f64,
    #[arg(long, default_value_t = 501)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DelayCurveArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub grid: TimeGridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    /// Counting window T; defaults to 100 mean delays.
    #[arg(long, allow_negative_numbers = true)]
    pub window: Option<f64>,
    /// Output file, stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[arg(long, default_value_t = 1e-2, allow_negative_numbers = true)]
    pub wmin: f64,
    #[arg(long, default_value_t = 1e2, allow_negative_numbers = true)]
    pub wmax: f64,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Linear instead of logarithmic frequency spacing.
    #[arg(long)]
    pub linear: bool,
    /// Leave out the ω = 0 row.
    #[arg(long)]
    pub no_zero: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelationArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub grid: TimeGridArgs,
    /// Add the resonant closed form j0 (requires δ = 0).
    #[arg(long)]
    pub with_resonant: bool,
    /// Add the weak-drive form j_pert.
    #[arg(long)]
    pub with_perturbative: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StreamFormat {
    Bin,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of photons, the conditioning photon at t = 0 included.
    #[arg(long, default_value_t = 100_000)]
    pub photons: usize,
    /// Counting window for Q̂; defaults to 100 mean delays.
    #[arg(long, allow_negative_numbers = true)]
    pub window: Option<f64>,
    #[arg(long, value_enum, default_value_t = StreamFormat::Bin)]
    pub stream_format: StreamFormat,
    /// Where to write the emission times.
    #[arg(long)]
    pub stream_out: PathBuf,
    /// Emit the exponential-delay stream with the same mean delay instead.
    #[arg(long)]
    pub poisson_reference: bool,
    /// Summary JSON file, stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Report file, stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Perturb the named check so the harness can be seen to fail.
    #[arg(long, hide = true, value_name = "CHECK")]
    pub inject_fault: Option<String>,
}

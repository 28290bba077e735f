use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "hetcv",
    version,
    about = "Heterogeneous diffusion and finite-speed (Cattaneo-Vernotte) transport",
    arg_required_else_help = true
)]
pub struct Cli {
    /// TOML file of flag defaults; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Probability density on a grid, with front atoms in a JSON sidecar.
    Pdf(PdfArgs),
    /// Mean-squared displacement curve.
    Msd(MsdArgs),
    /// Position autocorrelation of heterogeneous diffusion.
    Acf(AcfArgs),
    /// Time-averaged MSD of heterogeneous diffusion.
    Tamsd(TamsdArgs),
    /// Monte-Carlo ensembles with MSD, TA-MSD and histograms.
    Simulate(SimulateArgs),
    /// Noisy voter model paths and stationary histogram.
    SimulateVoter(VoterArgs),
    /// Gaver-Stehfest inversion of a preset or Prabhakar image.
    InvertLaplace(InvertArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Validate(ValidateArgs),
    #[command(subcommand, hide = true)]
    Specfun(SpecfunCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Finite-speed (Cattaneo-Vernotte) transport.
    Cv,
    /// Heterogeneous diffusion (τ → 0).
    Hd,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    /// Stochastic interpretation α ∈ [0, 1] (0 HK, 1/2 Stratonovich, 1 Itô).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Heterogeneity exponent β > 0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Cusp offset λ ≥ 0.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Diffusivity scale B > 0.
    #[arg(long = "B", default_value_t = 0.1, allow_negative_numbers = true)]
    #[serde(rename = "B")]
    pub b: f64,
    /// Lag time τ ≥ 0; the front speed is υ = √(B/τ).
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub tau: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct PdfArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Cv)]
    pub model: ModelKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Grid start (default: just outside the support, or ±5 rms for hd).
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    #[arg(long, default_value_t = 401)]
    pub n: usize,
    /// Use Gaver-Stehfest inversion even where a closed form exists.
    #[arg(long)]
    pub invert: bool,
    #[arg(long, default_value_t = 14)]
    pub n_terms: usize,
    /// Output directory for pdf.csv, pdf.json and meta.json (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct MsdArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Cv)]
    pub model: ModelKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ModelArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub tmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    /// Number of log-spaced times.
    #[arg(long, default_value_t = 61)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct AcfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t1: f64,
    /// Largest t₂; t₂ runs log-spaced over (t₁, tmax].
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct TamsdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ModelArgs,
    /// Measurement time T.
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub lag_min: f64,
    /// Largest lag (default T/10).
    #[arg(long)]
    pub lag_max: Option<f64>,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Hd,
    Telegrapher,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = EngineKind::Hd)]
    pub engine: EngineKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1000)]
    pub n_traj: usize,
    /// Root seed (default: $HETCV_SEED, else 0).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    /// Effective λ used when λ = 0 and the drift is singular.
    #[arg(long, default_value_t = 1e-4)]
    pub regularization: f64,
    /// Keep every k-th step.
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Histogram times (repeatable; default t_end).
    #[arg(long = "hist-t")]
    pub hist_t: Vec<f64>,
    /// Number of TA-MSD lags, log-spaced up to t_end/10.
    #[arg(long, default_value_t = 10)]
    pub n_lags: usize,
    /// Also write trajectories.csv.
    #[arg(long)]
    pub trajectories: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum VoterMethodKind {
    Gillespie,
    Discrete,
    Langevin,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct VoterArgs {
    /// Number of agents.
    #[arg(long = "N", default_value_t = 100)]
    #[serde(rename = "N")]
    pub n: u64,
    /// Idiosyncratic switching share A ∈ [0, 1].
    #[arg(long = "A", default_value_t = 0.1)]
    #[serde(rename = "A")]
    pub a: f64,
    /// Exponent of the transform y = (x/(1−x))^(β/2).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Initial count (default N/2).
    #[arg(long)]
    pub n0: Option<u64>,
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = VoterMethodKind::Gillespie)]
    pub method: VoterMethodKind,
    /// Step of the discrete and Langevin methods.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Sampling interval of path.csv (default t_end/1000).
    #[arg(long)]
    pub sample_dt: Option<f64>,
    /// Samples before this time are left out of the histogram (default t_end/10).
    #[arg(long)]
    pub burn_in: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// 1/s
    Constant,
    /// 1/(s+1)
    Exponential,
    /// 1/s²
    Ramp,
    /// e^(−s)/s, a known bad case that the diagnostic flags
    Step,
    /// s^(−2.5)/(s+2)^1.5
    Prabhakar,
    /// Laplace-space transport solution at --x with the model flags
    Cv,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct InvertArgs {
    #[arg(long, value_enum, conflicts_with = "params")]
    pub preset: Option<Preset>,
    /// Prabhakar image s^(ac−b)/(s^a+κ)^c given as a,b,c,kappa.
    #[arg(long, value_delimiter = ',', num_args = 1..=4, allow_negative_numbers = true)]
    pub params: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Position for the cv preset.
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    pub x: f64,
    /// Explicit times (comma separated); otherwise log-spaced over [tmin, tmax].
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub tmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 41)]
    pub n: usize,
    #[arg(long, default_value_t = 14)]
    pub n_terms: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Analytic,
    Laplace,
    Montecarlo,
    Voter,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Run only these criteria (repeatable, 1-12); overrides --suite.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
    pub criterion: Vec<u8>,
    /// Directory for validation.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SpecfunCommand {
    /// Evaluate one special function and print its value.
    Eval(EvalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecFn {
    Gamma,
    Lngamma,
    Rgamma,
    Pochhammer,
    Erfc,
    Besseli,
    Besselk,
    Hyp2f1,
    Ml3,
    Prabhakar,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub func: SpecFn,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub r: Option<u32>,
}

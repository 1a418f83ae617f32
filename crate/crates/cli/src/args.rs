use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Correlation dynamics of two-qubit states under one-sided dephasing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlation table over a thickness range, with event markers
    Sweep(SweepArgs),
    /// Full correlation report for one state
    Report(ReportArgs),
    /// Conditional entropy of A versus the measurement angle on B
    CondEntropy(CondEntropyArgs),
    /// Event markers only (sudden change, ESD, Q > C, plateaus)
    Events(EventsArgs),
    /// Simulated tomography
    #[command(subcommand)]
    Tomo(TomoCommand),
}

#[derive(Debug, Subcommand)]
pub enum TomoCommand {
    /// Simulate the 16 coincidence counts of a state
    Sim(TomoSimArgs),
    /// Reconstruct a state from counts, with bootstrap error bars
    Fit(TomoFitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Interference,
    FourMix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Single,
    Averaged,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("state").args(["family", "matrix"]).required(true)))]
pub struct StateArgs {
    /// Parametric input family
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Mixing weight b in [0, 1]
    #[arg(long, value_parser = unit_interval)]
    pub b: Option<f64>,
    /// Four-mix weight R in [0, 1]
    #[arg(long, value_parser = unit_interval)]
    pub r: Option<f64>,
    /// JSON file with an explicit 4x4 density matrix ({"dim": 4, "entries": [[re, im], ...]})
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Thickness (in units of lambda0) at which |kappa| = 1/2
    #[arg(long = "model-lhalf", default_value_t = 138.0, value_parser = positive)]
    pub l_half: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when omitted
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Largest thickness of the sweep, in units of lambda0
    #[arg(long = "l-max", default_value_t = 350.0, value_parser = positive)]
    pub l_max: f64,
    /// Number of grid points, both ends included
    #[arg(long, default_value_t = 141, value_parser = clap::value_parser!(u32).range(2..))]
    pub steps: u32,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EventsArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Plate thickness in units of lambda0
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    pub l: f64,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CondEntropyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Plate thicknesses in units of lambda0, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0", value_parser = non_negative)]
    pub l: Vec<f64>,
    /// Number of angles from 0 to 180 degrees, both ends included
    #[arg(long = "theta-steps", default_value_t = 181, value_parser = clap::value_parser!(u32).range(2..))]
    pub theta_steps: u32,
    /// Azimuth of the measurement direction, in degrees
    #[arg(long, default_value_t = 0.0, value_parser = azimuth)]
    pub phi: f64,
    /// Single keeps the |l> outcome only; averaged weights both outcomes
    #[arg(long, value_enum, default_value_t = Mode::Single)]
    pub mode: Mode,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TomoSimArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Plate thickness in units of lambda0
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    pub l: f64,
    /// Acquisition total N: the count for setting i has mean N Tr(P_i rho)
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub counts: u64,
    /// Seed of the ChaCha8 count generator
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Noiseless counts N Tr(P_i rho)
    #[arg(long)]
    pub exact: bool,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TomoFitArgs {
    /// Counts JSON as written by `tomo sim`
    #[arg(long, value_name = "FILE")]
    pub counts: PathBuf,
    /// Bootstrap resamples (0 disables, otherwise at least 50)
    #[arg(long, default_value_t = 200, value_parser = resamples)]
    pub bootstrap: usize,
    /// Seed of the first resample; resample k uses seed + k
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn number(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err("must be finite".into())
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err("must lie in [0, 1]".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("must be positive".into())
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err("must be non-negative".into())
    }
}

fn azimuth(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if (0.0..360.0).contains(&x) {
        Ok(x)
    } else {
        Err("must lie in [0, 360)".into())
    }
}

fn resamples(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if n == 0 || n >= 50 {
        Ok(n)
    } else {
        Err("must be 0 or at least 50".into())
    }
}

use std::path::PathBuf;

use circfrac::formfactor::Transform;
use circfrac::process::ProcessClass;
use circfrac::sampler::SamplingMethod;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "circfrac",
    version,
    about = "Periodic fractional and grey Brownian motion on the circle",
    long_about = "Debye and Kratky curves, seeded path ensembles, Monte Carlo validation of the form factor, and gyration reports for pfBm, pgBm and pggBm.\n\nExit codes: 0 success, 1 computation failure, 2 usage or validation error.\nSet CIRCFRAC_THREADS to fix the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a Debye function (or its Kratky transform) as CSV
    Debye(DebyeArgs),
    /// Sample a path ensemble
    Sample(SampleArgs),
    /// Compare the Monte Carlo form factor with the closed form
    Validate(ValidateArgs),
    /// Radius of gyration, end-to-halftime length and their relation
    Gyration(GyrationArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessArg {
    Pfbm,
    Pgbm,
    Pggbm,
}

impl From<ProcessArg> for ProcessClass {
    fn from(p: ProcessArg) -> Self {
        match p {
            ProcessArg::Pfbm => ProcessClass::Pfbm,
            ProcessArg::Pgbm => ProcessClass::Pgbm,
            ProcessArg::Pggbm => ProcessClass::Pggbm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformArg {
    Linear,
    Loglog,
    Kratky,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Linear => Transform::Linear,
            TransformArg::Loglog => Transform::Loglog,
            TransformArg::Kratky => Transform::Kratky,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Cholesky,
    Circulant,
}

impl From<MethodArg> for SamplingMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cholesky => SamplingMethod::Cholesky,
            MethodArg::Circulant => SamplingMethod::Circulant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Richardson extrapolation over nested sub-grids
    Extrapolated,
    /// Plain grid average
    Plain,
}

/// Reals may be given as decimals or as fractions such as `1/3`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    let v = match s.split_once('/') {
        Some((a, b)) => parse(a)? / parse(b)?,
        None => parse(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not a finite number"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProcessOpts {
    /// Process class
    #[arg(long, value_enum)]
    pub process: ProcessArg,
    /// Hurst parameter H in (0, 1/2]
    #[arg(long, value_parser = parse_real)]
    pub hurst: f64,
    /// Envelope order beta in (0, 1]; required for pggbm
    #[arg(long, value_parser = parse_real)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DebyeArgs {
    /// Process class
    #[arg(long, value_enum, required_unless_present = "preset", conflicts_with = "preset")]
    pub process: Option<ProcessArg>,
    /// Hurst parameter H in (0, 1/2]
    #[arg(long, value_parser = parse_real, required_unless_present = "preset", conflicts_with = "preset")]
    pub hurst: Option<f64>,
    /// Envelope order beta in (0, 1]; required for pggbm
    #[arg(long, value_parser = parse_real, conflicts_with = "preset")]
    pub beta: Option<f64>,
    /// Parameter set of one of the published figures
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Smallest y (default 0, or 0.01 for log-spaced transforms)
    #[arg(long = "ymin", value_parser = parse_real)]
    pub y_min: Option<f64>,
    /// Largest y (default 10, or 100 for log-spaced transforms)
    #[arg(long = "ymax", value_parser = parse_real)]
    pub y_max: Option<f64>,
    /// Number of y values
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// linear: evenly spaced y; loglog: log-spaced y; kratky: log-spaced y, stores y^2 f
    #[arg(long, value_enum)]
    pub transform: Option<TransformArg>,
    /// Output file, `-` for stdout; a directory for presets
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub process: ProcessOpts,
    /// Circle length L
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub length: f64,
    /// Number of grid points N
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Number of paths M
    #[arg(long, default_value_t = 1000)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Circulant)]
    pub method: MethodArg,
    /// csv: one row per path; binary: row-major little-endian f64
    #[arg(long, value_enum, default_value_t = EnsembleFormat::Csv)]
    pub format: EnsembleFormat,
    /// Output file, `-` for stdout
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub process: ProcessOpts,
    /// Circle length L
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub length: f64,
    /// Number of grid points N; a multiple of 32, at least 64
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Number of paths M
    #[arg(long, default_value_t = 20_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Circulant)]
    pub method: MethodArg,
    /// Wave numbers k, comma separated
    #[arg(long = "k", value_delimiter = ',', value_parser = parse_real, conflicts_with = "y_list")]
    pub k_list: Vec<f64>,
    /// Scaled wave numbers y, comma separated (default 0,0.5,1,2,4)
    #[arg(long = "y", value_delimiter = ',', value_parser = parse_real)]
    pub y_list: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Estimator::Extrapolated)]
    pub estimator: Estimator,
    /// Largest accepted |z|
    #[arg(long, value_parser = parse_real, default_value = "4")]
    pub z_max: f64,
    /// Report file (CSV), `-` for stdout
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
    /// Hurst parameter used for the closed form only (negative control)
    #[arg(long, value_parser = parse_real, hide = true)]
    pub analytic_hurst: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GyrationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub process: ProcessOpts,
    /// Circle length L
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub length: f64,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

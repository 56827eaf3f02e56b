//! `gtls`: limit shapes of random signatures from the command line.
//!
//! Exit codes: 0 success, 2 input or schema error, 3 numerical failure.
//! `GTLS_THREADS` caps the worker threads.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gtls", version, about = "Limit shapes of random signatures from extreme characters of U(infinity)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact moments of the limit measure as JSON.
    Moments(MomentsArgs),
    /// Limit density on a grid as CSV "x,p".
    Density(DensityArgs),
    /// Limit shape function on a grid as CSV "x,w".
    Shape(DensityArgs),
    /// Closed-form density of a preset as CSV "x,p".
    Preset(PresetCurveArgs),
    /// Finite-N oracle summary as JSON, optionally with the measure table.
    Oracle(OracleArgs),
    /// Quantized free convolution of two measures, as moment JSON.
    Convolve(ConvolveArgs),
    /// Growth velocity on a grid as CSV "x,y,value".
    Velocity(VelocityArgs),
    /// Limit height function on a grid as CSV "x,y,value".
    Height(HeightArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the result here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Preset name and parameters, as decimal or fraction strings.
#[derive(Args, Debug, Clone, Default)]
pub struct PresetParams {
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub gamma1: Option<String>,
    #[arg(long)]
    pub gamma2: Option<String>,
    #[arg(long = "alpha-tilde")]
    pub alpha_tilde: Option<String>,
    #[arg(long = "a-tilde")]
    pub a_tilde: Option<String>,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Limit parameter file or moment file.
    #[arg(long)]
    pub params: PathBuf,
    /// Number of moments, at most 24.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// inverse, nc or lagrange.
    #[arg(long, default_value = "inverse")]
    pub route: String,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// Limit parameter file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub params: Option<PathBuf>,
    /// Preset name instead of a parameter file.
    #[arg(long)]
    pub preset: Option<String>,
    #[command(flatten)]
    pub preset_params: PresetParams,
    /// Number of uniform grid points, at most 10^6.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    /// Left end of the grid; derived from the moments when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    /// Right end of the grid; derived from the moments when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    /// Relative imaginary part below which a critical root counts as real.
    #[arg(long = "root-tol", default_value_t = gtls_core::critical::REAL_TOL)]
    pub root_tol: f64,
    /// Append the closed-form density and fail if the deviation exceeds --tol.
    #[arg(long = "compare-preset")]
    pub compare_preset: bool,
    /// Sup-deviation allowed by --compare-preset.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Points this close to a closed-form breakpoint are left out of the comparison.
    #[arg(long = "edge-band", default_value_t = 1e-3)]
    pub edge_band: f64,
    /// Write support and flat regions as JSON here.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct PresetCurveArgs {
    /// planch, multi_alpha or multi_beta.
    pub name: String,
    #[command(flatten)]
    pub preset_params: PresetParams,
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Finite-N parameter file, or a limit file taken at its scaling sequence.
    #[arg(long)]
    pub params: PathBuf,
    /// Rank of the unitary group.
    #[arg(long = "N")]
    pub n: usize,
    /// Largest lambda_1 kept; the full measure is used when absent.
    #[arg(long)]
    pub cutoff: Option<i64>,
    /// Allowed missing mass of the truncated table.
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    /// Largest moment index.
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    /// Also write the truncated measure as CSV "lambda,prob" (needs --cutoff).
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    /// First limit parameter or moment file.
    pub first: PathBuf,
    /// Second limit parameter or moment file.
    pub second: PathBuf,
    /// Order used for limit parameter files.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct VelocityArgs {
    /// Limit parameter file.
    #[arg(long)]
    pub params: PathBuf,
    /// alpha_plus, beta_plus, alpha_minus, beta_minus, gamma_plus or gamma_minus.
    #[arg(long)]
    pub kind: String,
    /// Value of the added parameters, or the growth rate for gamma kinds.
    #[arg(long, default_value_t = 1.0)]
    pub value: f64,
    /// A value or a range "a:b:n".
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// A value or a range "a:b:n".
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub y: String,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct HeightArgs {
    /// Limit parameter file.
    #[arg(long)]
    pub params: PathBuf,
    /// A value or a range "a:b:n".
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// A value or a range "a:b:n".
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub y: String,
    #[command(flatten)]
    pub out: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gtls: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

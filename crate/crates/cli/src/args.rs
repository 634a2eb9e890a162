use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ballfourier", version, about = "Evaluate and verify unit-ball polynomials and their Fourier transforms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Closed-form Fourier transform of the tanh family, optionally checked by quadrature.
    Fourier(FourierArgs),
    /// Run an identity-verification suite and emit its reports.
    Verify(VerifyArgs),
    /// Tabulate a function over a parameter grid.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFn {
    Gegenbauer,
    Jacobi,
    Hahn,
    Ball,
    #[value(name = "f_r")]
    FR,
    #[value(name = "d_family")]
    DFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFn {
    Theta,
    Ball,
    #[value(name = "d_family")]
    DFamily,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parameters shared by the evaluation commands; each function reads the subset it needs.
#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Number of variables; must match the length of --n when both are given.
    #[arg(long)]
    pub r: Option<usize>,
    /// Degree or comma-separated multi-index.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: EvalFn,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Continuous Hahn parameters a,b,c,d.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub hahn_params: Option<Vec<f64>>,
    /// Evaluation point (comma-separated for several variables).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Imaginary parts of the evaluation point, for complex-argument functions.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x_im: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<f64>>,
    /// Compare against the quadrature oracle; exit 1 if they disagree.
    #[arg(long)]
    pub check: bool,
    /// Relative tolerance for --check.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub r_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replace every relative tolerance in the suite.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "fn", value_enum)]
    pub function: TableFn,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Factor index for theta.
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    /// First grid value on every axis.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<f64>,
    /// Last grid value on every axis.
    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

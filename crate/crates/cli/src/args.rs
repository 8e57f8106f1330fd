//! Command-line arguments. Every argument struct is also the serialized run
//! configuration written next to the output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "fracou", version, about = "Gamma-mixed fractional Ornstein-Uhlenbeck numerics")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    /// Re-run the configuration stored in a sidecar or config file.
    #[arg(long, value_name = "FILE")]
    pub replay: Option<PathBuf>,

    /// Output path for --replay (default: the recorded one).
    #[arg(long, requires = "replay")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Tabulate E_rho(-x), E_{rho,rho}(-x) or G_rho(-x).
    Eval(EvalArgs),
    /// Sample the Gamma mixing law, its moments, or the admissibility condition.
    Mixing(MixingArgs),
    /// Simulate path ensembles.
    Simulate(SimulateArgs),
    /// Run a convergence check and write its report.
    Diagnose(DiagnoseArgs),
}

impl Command {
    pub fn out_mut(&mut self) -> &mut PathBuf {
        match self {
            Command::Eval(a) => &mut a.out,
            Command::Mixing(a) => &mut a.out,
            Command::Simulate(a) => &mut a.out,
            Command::Diagnose(a) => &mut a.out,
        }
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Function {
    /// E_rho(-x)
    Ml,
    /// E_{rho,rho}(-x)
    Ml2,
    /// G_rho(-x) with shape mu
    Gml,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: Function,
    #[arg(long)]
    pub rho: f64,
    /// Shape of the mixing law (gml only).
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub xmin: f64,
    #[arg(long)]
    pub xmax: f64,
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    #[arg(long, default_value = "eval.csv")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MixingAction {
    /// Draw rates alpha_1..alpha_n.
    Sample,
    /// E[alpha^p] for each requested p.
    Moments,
    /// The condition mu > 1/(2 rho).
    Condition,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
pub struct MixingArgs {
    #[arg(value_enum)]
    pub action: MixingAction,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Required for `sample`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Orders for `moments`.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0])]
    pub p: Vec<f64>,
    /// Order for `condition`.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value = "mixing.csv")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    /// X_k for n rates on one driver
    Component,
    /// Y_n on independent drivers
    Empirical,
    /// Y on independent drivers
    Limit,
    /// Y by factorizing its covariance
    LimitExact,
    /// eta on independent drivers
    Stationary,
    /// xi_k for n rates on one driver
    Xi,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub process: Process,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    /// Number of rates for component, empirical and xi.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Truncation tolerance for stationary and xi.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value = "paths.csv")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    L2sup,
    Tightness,
    Pathwise,
    Cauchy,
    Stationarity,
    Remark,
    Variance,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
pub struct DiagnoseArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Sample sizes (default depends on the check).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Monte Carlo paths (default depends on the check).
    #[arg(long)]
    pub mc: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "T", default_value_t = 2.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Time at which Var Y(t) is compared with sigma^2.
    #[arg(long, default_value_t = 20.0)]
    pub y_time: f64,
    /// Times for the Cauchy check (default 10 * 2^k, k = 0..10).
    #[arg(long, value_delimiter = ',')]
    pub t_list: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub mc_dt: f64,
    #[arg(long, default_value_t = 100.0)]
    pub mc_max_t: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long, default_value = "report.json")]
    pub out: PathBuf,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "lobav",
    version,
    about = "Trade avalanches in a random-walk limit order book"
)]
pub struct Cli {
    /// Worker threads for Monte Carlo and grid sweeps. Output does not depend on it.
    #[arg(long, global = true, env = "LOBAV_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo distribution of an avalanche or trade-time quantity.
    ///
    /// Writes distribution.csv with columns
    /// value,count,probability,std_error,ci_low,ci_high
    /// (probabilities over uncensored paths, interval p -/+ z * std_error)
    /// and manifest.json.
    Simulate(SimulateArgs),
    /// Exact rational coefficients from the generating functions.
    ///
    /// Writes exact.csv; the columns depend on the target (see --target).
    /// Rationals are printed as num/den; --decimal adds a decimal column per value.
    Exact(ExactArgs),
    /// Run verification suites and print PASS/FAIL per check.
    ///
    /// With --out, also writes verify.csv with columns
    /// suite,check,expected,actual,status. Exits with 1 if any check fails.
    Verify(VerifyArgs),
    /// Continuum-limit transforms, densities and convergence studies.
    ///
    /// Writes limit.csv. Columns per target:
    /// simplified: lambda,epsilon,value;
    /// full: lambda,epsilon,mu,value;
    /// h: x,mu,g,h;
    /// hyperbolic: s,mu,tanh_term,coth_term,csch_term,sech_sq_term,sech_sq_half_term,identity_residual;
    /// converge-t1 / converge-simplified: n,discrete_value,limit_value,scaled_error,fitted_order.
    Limit(LimitArgs),
    /// Re-run the command recorded in a manifest and compare output digests.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, default_value = "lobav-out")]
    pub out: PathBuf,
    /// Overwrite existing outputs.
    #[arg(long)]
    pub force: bool,
}

impl Default for OutputArgs {
    fn default() -> Self {
        Self {
            out: PathBuf::from("lobav-out"),
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantityArg {
    /// Simplified avalanche length (ladder times only).
    Simplified,
    /// Full avalanche length (all trades).
    Full,
    /// Time of the first trade after time 0.
    T1,
    /// Index of the first Type II trade among trades after time 0.
    DIndex,
    /// Time of the first Type II trade after time 0.
    TauD,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub mu: i64,
    #[arg(long)]
    pub epsilon: u64,
    /// Number of simulated paths.
    #[arg(long)]
    pub paths: u64,
    #[arg(long)]
    pub seed: u64,
    /// Steps per path before it is counted as censored [default: 64 eps + 64 mu^2].
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Start from an empty book instead of a full one.
    #[arg(long)]
    pub empty_book: bool,
    #[arg(long, value_enum, default_value = "full")]
    pub quantity: QuantityArg,
    /// Width of the printed interval in standard errors.
    #[arg(long, default_value_t = 4.0)]
    pub z: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactTarget {
    /// P[T1 = n], n = 1..=order (needs --mu). Columns n,probability.
    T1,
    /// P[T1 > eps] (needs --mu; one row for --epsilon, else eps = 1..=order). Columns epsilon,q.
    Q,
    /// Simplified avalanche law, k = 0..=order (needs --epsilon). Columns k,probability.
    SimplifiedPgf,
    /// Full avalanche law, k = 0..=order (needs --mu, --epsilon). Columns k,probability.
    FullPgf,
    /// Mean and variance of the simplified avalanche (one row for --epsilon, else 1..=9).
    /// Columns epsilon,mean,variance.
    Moments,
    /// First trade of an empty book, n = 1..=order (needs --mu). Columns n,type1,type2,total.
    EmptyT1,
    /// Path class generating functions, n = 0..=order (needs --mu). Columns n,a,b,c.
    Classes,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    #[arg(long, value_enum)]
    pub target: ExactTarget,
    #[arg(long)]
    pub mu: Option<i64>,
    #[arg(long)]
    pub epsilon: Option<u64>,
    /// Highest power of z.
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    /// Add a decimal column for every rational column.
    #[arg(long)]
    pub decimal: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
    Tables,
    Oracle,
    Montecarlo,
    Limits,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BudgetArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    #[arg(long, value_enum, default_value = "quick")]
    pub budget: BudgetArg,
    /// Seed for the Monte Carlo suite.
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Directory for verify.csv and manifest.json; nothing is written without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitTarget {
    Simplified,
    Full,
    H,
    Hyperbolic,
    ConvergeT1,
    ConvergeSimplified,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct LimitArgs {
    #[arg(long, value_enum)]
    pub target: LimitTarget,
    /// Laplace variables (the s values for hyperbolic and converge-t1).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub lambda_grid: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Grid of n for the convergence studies.
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub n_grid: Vec<u64>,
    /// Points x for the h target.
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,0.5,1,2,5,10")]
    pub x_grid: Vec<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RerunArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

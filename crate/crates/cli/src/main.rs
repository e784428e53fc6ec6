//! `fracdec` — command-line front end for the fractional-entropy decision
//! toolkit.
//!
//! Exit codes: 0 success, 1 validation error, 2 computation error,
//! 64 usage error. Every failure prints a single diagnostic line prefixed
//! `error:`. All randomness is controlled by `--seed`; the same argv and
//! seed produce byte-identical outputs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use fracdec_core::ErrorClass;

#[derive(Parser)]
#[command(
    name = "fracdec",
    version,
    about = "Fractional-order entropy decision models, stock selection and efficient frontiers"
)]
pub struct Cli {
    /// Output format (default: text for analysis commands, csv for data
    /// commands)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the primary output to this file instead of stdout
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed controlling all randomized stages
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads (falls back to FRACDEC_THREADS, then all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Natural,
    Ten,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    EuFe,
    EuFev,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UtilityArg {
    Linear,
    Log,
    Sqrt,
    Square,
    SShaped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarianceArg {
    Population,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasePolicyArg {
    Natural,
    Ten,
    PaperMix,
}

#[derive(Subcommand)]
pub enum Command {
    /// Fractional entropy of an explicit probability vector
    Entropy(EntropyArgs),
    /// Risk values and preference ranking for a decision problem
    Decide(DecideArgs),
    /// λ-preference intervals for a pair of actions
    Intervals(IntervalsArgs),
    /// Built-in case studies: risk tables, λ tables, entropy tables, sweeps
    Casebook(CasebookArgs),
    /// Validate a price CSV and emit log returns
    Ingest(IngestArgs),
    /// Per-stock risk factors (NEU, NV, fractional entropy) from prices
    Factors(FactorsArgs),
    /// Bootstrap-ranked stock selection from risk factors
    Select(SelectArgs),
    /// Long-only mean-variance efficient frontier
    Frontier(FrontierArgs),
    /// Compare a subset frontier against the full universe
    Compare(CompareArgs),
}

#[derive(Args)]
pub struct EntropyArgs {
    /// Comma-separated probabilities, e.g. 0.5,0.5
    #[arg(long)]
    pub pmf: String,
    /// Fractional order in (0, 1]
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "natural")]
    pub base: BaseArg,
}

#[derive(Args)]
pub struct DecideArgs {
    /// Decision problem JSON ({actions: [{label, outcomes, probs}], utility})
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "eu-fe")]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "natural")]
    pub base: BaseArg,
}

#[derive(Args)]
pub struct IntervalsArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// Index of the first action of the compared pair
    #[arg(long, default_value_t = 0)]
    pub first: usize,
    /// Index of the second action of the compared pair
    #[arg(long, default_value_t = 1)]
    pub second: usize,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "eu-fe")]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "natural")]
    pub base: BaseArg,
}

#[derive(Args)]
pub struct CasebookArgs {
    /// nawrocki-harding | levy | allais | portfolios | all
    #[arg(long, default_value = "all")]
    pub case: String,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    /// Restrict to one utility (default: the case's reference utilities)
    #[arg(long, value_enum)]
    pub utility: Option<UtilityArg>,
    /// Coefficients b,c for the linear utility
    #[arg(long)]
    pub utility_params: Option<String>,
    /// Orders for the portfolio entropy table
    #[arg(long, default_value = "0.1,0.3,0.5,0.7,0.9,1.0")]
    pub alphas: String,
    #[arg(long, value_enum, default_value = "paper-mix")]
    pub base_policy: BasePolicyArg,
    /// Emit a risk-vs-α sweep over these orders (plot data)
    #[arg(long)]
    pub sweep_alphas: Option<String>,
    /// Fixed λ for the sweep
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "eu-fe")]
    pub sweep_measure: MeasureArg,
}

#[derive(Args)]
pub struct IngestArgs {
    /// Price CSV (`date,STOCK1,...`)
    #[arg(long)]
    pub prices: PathBuf,
}

#[derive(Args)]
pub struct FactorsArgs {
    #[arg(long)]
    pub prices: PathBuf,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "natural")]
    pub base: BaseArg,
    #[arg(long, value_enum, default_value = "s-shaped")]
    pub utility: UtilityArg,
    #[arg(long)]
    pub utility_params: Option<String>,
    /// Number of return bins
    #[arg(long, default_value_t = 15)]
    pub bins: usize,
    #[arg(long, value_enum, default_value = "population")]
    pub variance: VarianceArg,
}

#[derive(Args)]
pub struct SelectArgs {
    /// Published factor CSV (`stock,neu,nv,h_alpha`)
    #[arg(long, conflicts_with = "prices")]
    pub factors: Option<PathBuf>,
    /// Price CSV to compute factors from
    #[arg(long)]
    pub prices: Option<PathBuf>,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "eu-fe")]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "natural")]
    pub base: BaseArg,
    #[arg(long, value_enum, default_value = "s-shaped")]
    pub utility: UtilityArg,
    #[arg(long, default_value_t = 15)]
    pub bins: usize,
    /// Bootstrap replicates
    #[arg(long, default_value_t = 100)]
    pub bootstrap: usize,
    /// λ grid step for the surrogate's training table
    #[arg(long, default_value_t = 0.01)]
    pub lambda_step: f64,
    /// Report the top-k selection
    #[arg(long, default_value_t = 7)]
    pub top: usize,
    #[arg(long, default_value_t = 500)]
    pub max_epochs: usize,
    #[arg(long, default_value_t = 25)]
    pub patience: usize,
    /// Hidden layer widths, e.g. 10 or 8,4
    #[arg(long, default_value = "10")]
    pub hidden: String,
}

#[derive(Args)]
pub struct FrontierArgs {
    #[arg(long)]
    pub prices: PathBuf,
    /// Comma-separated stock labels (default: all stocks)
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub prices: PathBuf,
    /// Comma-separated stock labels of the subset frontier
    #[arg(long)]
    pub subset: String,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Relative-gap threshold defining the crossover return
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let _ = err.print();
            return ExitCode::from(64);
        }
    };

    let threads = cli.threads.or_else(|| {
        std::env::var("FRACDEC_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let line = err.to_string().replace('\n', "; ");
            eprintln!("error: {line}");
            match err.class() {
                ErrorClass::Validation => ExitCode::from(1),
                ErrorClass::Computation => ExitCode::from(2),
            }
        }
    }
}

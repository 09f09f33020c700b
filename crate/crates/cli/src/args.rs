use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depmark::ExampleId;

#[derive(Debug, Parser)]
#[command(
    name = "depmark",
    version,
    about = "Directed dependence measures through the Markov product"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Output file (single-output commands) or directory (`figure`, `reproduce`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format. Reports default to json, samples to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in example models.
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
    /// Draw an (X, Y) sample from a model.
    Sample(SampleArgs),
    /// Draw a Markov sample (X, Y, Y') from a model.
    Markov(MarkovArgs),
    /// Exact measures of a model.
    Exact(ExactArgs),
    /// Estimate the measures from an (X, Y) CSV.
    Estimate(EstimateArgs),
    /// Characterize dependence, exactly from a model or empirically from a Markov CSV.
    Check(CheckArgs),
    /// Emit the scatter data of a figure as CSV files.
    Figure(FigureArgs),
    /// Recompute every example and check the reference values.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Subcommand)]
pub enum ExampleAction {
    /// List example ids with descriptions.
    List,
    /// Print the model file of an example.
    Show { id: ExampleId },
}

/// Where the model comes from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModelSource {
    /// Built-in example id.
    #[arg(long)]
    pub example: Option<ExampleId>,
    /// Model file in JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Number of rows.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct MarkovArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Number of rows.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Replace Y and Y' by F_Y(Y) and F_Y(Y').
    #[arg(long)]
    pub transform: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Definition,
    Markov,
    Both,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Computation route.
    #[arg(long, value_enum, default_value_t = PathChoice::Both)]
    pub path: PathChoice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Xi,
    R2,
    Lambda,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV with columns x1..xp,y.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Measures to estimate.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Measure::Xi, Measure::R2, Measure::Lambda])]
    pub measures: Vec<Measure>,
    /// Clip estimates to [0, 1].
    #[arg(long)]
    pub clamp: bool,
}

#[derive(Debug, Args)]
#[group(id = "check_source", required = true, multiple = false, args = ["example", "model", "input"])]
pub struct CheckArgs {
    /// Built-in example id (exact mode).
    #[arg(long)]
    pub example: Option<ExampleId>,
    /// Model file in JSON (exact mode).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Markov CSV with columns x1..xp,y,yprime (empirical mode).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Treat the CSV values as already transformed to [0, 1].
    #[arg(long, requires = "input")]
    pub transformed: bool,
    /// Gap tolerance for empirical block detection.
    #[arg(long, default_value_t = depmark::characterize::BLOCK_TOL)]
    pub block_tol: f64,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
    pub id: u8,
    /// Sample size; 2000 for figure 4 and 1000 otherwise.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Sample size for the estimators.
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
}

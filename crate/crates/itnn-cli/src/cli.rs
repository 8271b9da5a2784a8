//! Command-line surface: subcommands, shared flags, and value parsing.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use itnn::datasets::FunctionPreset;
use itnn::{Membership, Metric};

#[derive(Parser, Debug)]
#[command(
    name = "itnn",
    version,
    about = "One-pass CC4/FC classifiers with PNN/WiSARD baselines and chaotic-series benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Train a model on a CSV dataset and write a model file
    Train(TrainArgs),
    /// Predict outputs for feature rows using a saved model
    Predict(PredictArgs),
    /// Evaluate a saved model against a labelled CSV dataset
    Eval(EvalArgs),
    /// Run a named benchmark end to end and emit a report
    Bench(BenchArgs),
    /// Generate benchmark series or supervised datasets as CSV
    GenData(GenDataArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Cc4,
    Fc,
    Pnn,
    Wizard,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipKind {
    Inverse,
    Gaussian,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MappingKind {
    Sequential,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchName {
    Henon,
    MackeyGlass,
    Function,
}

impl BenchName {
    pub fn tag(&self) -> &'static str {
        match self {
            BenchName::Henon => "henon",
            BenchName::MackeyGlass => "mackey-glass",
            BenchName::Function => "function",
        }
    }
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_preset(s: &str) -> Result<FunctionPreset, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Model hyperparameters shared by `train` and `bench`.
#[derive(Args, Clone, Debug)]
pub struct ModelOpts {
    /// Model type
    #[arg(long, value_enum, default_value_t = ModelKind::Cc4)]
    pub model: ModelKind,

    /// CC4 Hamming radius of generalization
    #[arg(long, default_value_t = 0)]
    pub radius: usize,

    /// Distance metric for FC (city|euclid|box)
    #[arg(long, value_parser = parse_metric, default_value = "euclid")]
    pub metric: Metric,

    /// Neighbours blended in FC kNN mode (default: sample count / 10)
    #[arg(long)]
    pub k: Option<usize>,

    /// Thermometer levels; enables real-to-binary encoding for cc4/wizard
    #[arg(long)]
    pub levels: Option<usize>,

    /// Encoder range lower bound (train default 0; bench default: data range)
    #[arg(long)]
    pub lo: Option<f64>,

    /// Encoder range upper bound (train default 1; bench default: data range)
    #[arg(long)]
    pub hi: Option<f64>,

    /// PNN smoothing parameter / gaussian membership width
    #[arg(long, default_value_t = 0.25)]
    pub sigma: f64,

    /// FC membership function
    #[arg(long, value_enum, default_value_t = MembershipKind::Inverse)]
    pub membership: MembershipKind,

    /// WiSARD RAM-node address bits
    #[arg(long, default_value_t = 4)]
    pub address_bits: usize,

    /// WiSARD input-bit-to-node mapping
    #[arg(long, value_enum, default_value_t = MappingKind::Sequential)]
    pub mapping: MappingKind,

    /// Seed for anything randomized (function noise, random mapping)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn membership_from(opts: &ModelOpts) -> Membership {
    match opts.membership {
        MembershipKind::Inverse => Membership::InverseDistance,
        MembershipKind::Gaussian => Membership::Gaussian { sigma: opts.sigma },
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Dataset CSV (header row; target columns prefixed `target:`)
    pub data: PathBuf,

    #[command(flatten)]
    pub opts: ModelOpts,

    /// Where to write the model file
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// Saved model file
    pub model_file: PathBuf,

    /// Feature CSV (target columns, if present, are ignored)
    pub data: Option<PathBuf>,

    /// Inline comma-separated feature vector instead of a CSV file
    #[arg(long, conflicts_with = "data")]
    pub vector: Option<String>,

    /// Write predictions here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Saved model file
    pub model_file: PathBuf,

    /// Labelled dataset CSV
    pub data: PathBuf,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Benchmark name
    #[arg(value_enum)]
    pub name: BenchName,

    #[command(flatten)]
    pub opts: ModelOpts,

    #[arg(long, default_value_t = 500)]
    pub train_size: usize,

    #[arg(long, default_value_t = 100)]
    pub test_size: usize,

    /// Sliding-window length (series benchmarks)
    #[arg(long, default_value_t = 4)]
    pub window: usize,

    /// Prediction horizon (series benchmarks)
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,

    /// Target function for the `function` benchmark
    #[arg(long, value_parser = parse_preset, default_value = "sin")]
    pub preset: FunctionPreset,

    /// Gaussian target noise for the `function` benchmark
    #[arg(long, default_value_t = 0.0)]
    pub noise_sd: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenDataArgs {
    /// Generator name
    #[arg(value_enum)]
    pub name: BenchName,

    /// Number of points (series) or samples (function)
    #[arg(long, default_value_t = 600)]
    pub n: usize,

    /// Emit a supervised window CSV instead of a raw series
    #[arg(long)]
    pub window: Option<usize>,

    /// Horizon for the supervised window CSV
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,

    /// Target function for `function` data
    #[arg(long, value_parser = parse_preset, default_value = "sin")]
    pub preset: FunctionPreset,

    /// Gaussian target noise for `function` data
    #[arg(long, default_value_t = 0.0)]
    pub noise_sd: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output path
    #[arg(long)]
    pub out: PathBuf,
}

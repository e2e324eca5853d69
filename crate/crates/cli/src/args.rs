//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rtd_core::crossgraph::Form;
use rtd_core::persistence::{EngineConfig, Reduction, DEFAULT_MAX_SIMPLICES};
use rtd_core::rtd::RtdConfig;

#[derive(Debug, Parser)]
#[command(name = "rtd", version, about = "Topological divergence between paired point clouds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Batched RTD score between two CSV point clouds (JSON report on stdout).
    Compare(CompareArgs),
    /// R-Cross-Barcode of two CSV point clouds, optionally drawn as SVG.
    Barcode(BarcodeArgs),
    /// Reproduce a synthetic benchmark and rank-correlate the measures.
    Bench(BenchArgs),
    /// Write a synthetic cloud family as CSV files.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Algorithm1,
    Reduced,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Algorithm1 => Form::Algorithm1,
            FormArg::Reduced => Form::Reduced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionArg {
    Cohomology,
    HomologyTwist,
}

impl From<ReductionArg> for Reduction {
    fn from(r: ReductionArg) -> Self {
        match r {
            ReductionArg::Cohomology => Reduction::Cohomology,
            ReductionArg::HomologyTwist => Reduction::HomologyTwist,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Clusters,
    Rings,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Clusters => "clusters",
            Suite::Rings => "rings",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// First cloud, one point per row.
    pub file_a: PathBuf,
    /// Second cloud; row i corresponds to row i of the first.
    pub file_b: PathBuf,
    /// Skip a header row in both files.
    #[arg(long)]
    pub header: bool,
}

/// Options shared by every command that builds cross-barcodes.
#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Homology dimension.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Quantile of pairwise distances used as the unit of scale.
    #[arg(long, default_value_t = 0.9)]
    pub quantile: f64,
    #[arg(long, value_enum, default_value_t = FormArg::Algorithm1)]
    pub form: FormArg,
    /// Refuse complexes with more simplices than this.
    #[arg(long, env = "RTD_MAX_SIMPLICES", default_value_t = DEFAULT_MAX_SIMPLICES)]
    pub max_simplices: u64,
    #[arg(long, value_enum, default_value_t = ReductionArg::Cohomology)]
    pub reduction: ReductionArg,
}

impl EngineArgs {
    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            max_simplices: self.max_simplices,
            reduction: self.reduction.into(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// Points per batch; clouds no larger than this are used whole, once.
    #[arg(long, default_value_t = 500)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 10)]
    pub batches: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report RTD(A, B) only instead of the average of both directions.
    #[arg(long)]
    pub one_way: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
}

impl ScoreArgs {
    pub fn config(&self) -> RtdConfig {
        RtdConfig {
            batch_size: self.batch_size,
            batches: self.batches,
            dim: self.engine.dim,
            quantile: self.engine.quantile,
            form: self.engine.form.into(),
            seed: self.seed,
            symmetric: !self.one_way,
            engine: self.engine.engine(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub score: ScoreArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BarcodeArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Also draw the bars to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Points per cloud (300 for clusters, 500 for rings).
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub score: ScoreArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geotsp::experiments::{Heuristic, ReportFormat, DEFAULT_K0};
use serde::Serialize;

/// Geodesics and tours on randomly embedded Erdős–Rényi graphs.
#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "geotsp", version)]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    /// Master seed.
    #[arg(long, global = true, env = "GEOTSP_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Directory for reports, plots and default output files.
    #[arg(long, global = true, default_value = "geotsp-out")]
    pub out_dir: PathBuf,
    /// Report format: CSV rows plus a JSON sidecar, or one JSON file.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write an SVG plot next to the report.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON object of flag values, overridden by flags given on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeuristicArg {
    #[value(alias = "karp_partition")]
    KarpPartition,
    #[value(alias = "posa_reduce")]
    PosaReduce,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::KarpPartition => Heuristic::KarpPartition,
            HeuristicArg::PosaReduce => Heuristic::PosaReduce,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TourMethod {
    #[value(alias = "karp_partition")]
    KarpPartition,
    #[value(alias = "posa_reduce")]
    PosaReduce,
    /// Greedy line tour; needs d = 1.
    #[value(alias = "line_greedy")]
    LineGreedy,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    HeldKarp,
    BruteForce,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    N,
    P,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    UnitPoisson,
    BernoulliCenter,
    FixedGrid,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Sample a uniform point cloud with Bernoulli edges and write it.
    Generate(GenerateArgs),
    /// Shortest path between two vertices of a graph file.
    Geodesic(GeodesicArgs),
    /// Heuristic Hamilton tour of a graph file.
    Tour(TourArgs),
    /// Optimal tour of a small graph file.
    Exact(ExactArgs),
    /// Additive excess of far pairs across p = ω·ln^d(n)/n.
    ScanThreshold(ThresholdArgs),
    /// Log-log fit of tour length against n or p.
    FitScaling(ScalingArgs),
    /// T/n^((d-1)/d) across n and its stabilization.
    EstimateBeta(BetaArgs),
    /// Exhaustive check of the permutation inequality.
    VerifyLemmas(LemmaArgs),
    /// Tail of the point count of a block process.
    Concentration(ConcentrationArgs),
    /// Tour growth on nested prefixes.
    Continuity(ContinuityArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Generate(_) => "generate",
            Self::Geodesic(_) => "geodesic",
            Self::Tour(_) => "tour",
            Self::Exact(_) => "exact",
            Self::ScanThreshold(_) => "scan-threshold",
            Self::FitScaling(_) => "fit-scaling",
            Self::EstimateBeta(_) => "estimate-beta",
            Self::VerifyLemmas(_) => "verify-lemmas",
            Self::Concentration(_) => "concentration",
            Self::Continuity(_) => "continuity",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Keep only edges of length at most this.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Graph file; defaults to `<out-dir>/graph.geograph`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub source: usize,
    #[arg(long)]
    pub target: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TourArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = TourMethod::KarpPartition)]
    pub method: TourMethod,
    /// Partition density scale: cells use K = k0 / p.
    #[arg(long, default_value_t = DEFAULT_K0)]
    pub k0: f64,
    /// Tour file; defaults to `<out-dir>/tour.txt`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExactArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Solver::HeldKarp)]
    pub solver: Solver,
    /// Tour file; defaults to `<out-dir>/exact.txt`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 20000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0])]
    pub omega_grid: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = SweepAxis::N)]
    pub sweep: SweepAxis,
    /// Edge probability of the n sweep.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Vertex count of the p sweep.
    #[arg(long, default_value_t = 16384)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2048, 4096, 8192, 16384, 32768])]
    pub n_grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2, 0.4])]
    pub p_grid: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = HeuristicArg::KarpPartition)]
    pub heuristic: HeuristicArg,
    #[arg(long, default_value_t = DEFAULT_K0)]
    pub k0: f64,
    /// Also aggregate with failed trials counted as n².
    #[arg(long)]
    pub paper_convention: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BetaArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [256, 1024, 4096, 16384])]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = HeuristicArg::KarpPartition)]
    pub heuristic: HeuristicArg,
    #[arg(long, default_value_t = DEFAULT_K0)]
    pub k0: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ConcentrationArgs {
    #[arg(long, value_enum, default_value_t = ProcessKind::UnitPoisson)]
    pub process: ProcessKind,
    /// Mean points per block of the Poisson process.
    #[arg(long, default_value_t = 1.0)]
    pub intensity: f64,
    /// Retention probability of the Bernoulli-center process.
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256])]
    pub blocks: Vec<usize>,
    #[arg(long, default_value_t = 10000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ContinuityArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.01, 0.05, 0.1])]
    pub delta_grid: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = HeuristicArg::KarpPartition)]
    pub heuristic: HeuristicArg,
    #[arg(long, default_value_t = DEFAULT_K0)]
    pub k0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
}

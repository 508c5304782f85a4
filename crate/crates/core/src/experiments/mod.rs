//! Monte Carlo studies with seeded, reproducible rows, bootstrap
//! aggregates and log-log fits.

mod concentration;
mod continuity;
mod lemma;
mod report;
mod scaling;
mod stats;
mod threshold;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use concentration::{concentration_check, ConcentrationConfig, ConcentrationOutcome, TailPoint};
pub use continuity::{continuity_check, ContinuityConfig, ContinuityOutcome};
pub use lemma::{verify_permutation_lemma, LemmaOutcome};
pub use report::{Aggregate, ExperimentReport, ReportFormat, ReportRow};
pub use scaling::{
    estimate_beta, scaling_fit, BetaConfig, BetaOutcome, GridPoint, ScalingConfig, ScalingOutcome, Sweep,
    MAX_FAILURE_FRACTION,
};
pub use stats::{bootstrap_ci, least_squares, summarize, Fit, Summary, BOOTSTRAP_RESAMPLES};
pub use threshold::{threshold_scan, ThresholdConfig, ThresholdOutcome, ThresholdPoint};

use crate::construct::{karp_partition_tour, nn_lower_bound, solve_direct, KarpConfig};
use crate::error::{invalid, Result};
use crate::model::{attach_bernoulli_edges, generate_uniform_cloud};
use crate::rng::RngSeed;
use crate::Graph64;

/// Default `k0` in `K = k0 / p`: cells hold about `2·π·ln n / p` points
/// in the plane, so in-cell degrees stay near `2·π·ln n`.
pub const DEFAULT_K0: f64 = 2.0;

/// Slack allowed when checking a tour against the nearest-neighbor bound.
pub const LOWER_BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heuristic {
    /// Partition into cells, solve each, patch along the snake order.
    KarpPartition,
    /// Rotation–extension on the whole graph followed by 2-opt.
    PosaReduce,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::KarpPartition => "karp_partition",
            Self::PosaReduce => "posa_reduce",
        })
    }
}

impl FromStr for Heuristic {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "karp_partition" => Ok(Self::KarpPartition),
            "posa_reduce" => Ok(Self::PosaReduce),
            _ => Err(invalid(format!("unknown heuristic {s:?}, expected karp_partition or posa_reduce"))),
        }
    }
}

/// A heuristic tour's length next to the nearest-neighbor lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TourRun {
    pub length: f64,
    pub lower_bound: f64,
    pub cells_per_axis: usize,
}

impl TourRun {
    pub fn dominates_bound(&self) -> bool {
        self.lower_bound <= self.length + LOWER_BOUND_SLACK
    }
}

/// Runs `heuristic` with density constant `K = k0 / p`. Failures come
/// back as a message.
pub fn run_heuristic(
    graph: &Graph64,
    heuristic: Heuristic,
    k0: f64,
    seed: &RngSeed,
) -> std::result::Result<TourRun, String> {
    let (tour, cells_per_axis) = match heuristic {
        Heuristic::KarpPartition => {
            let config = KarpConfig::with_density(k0 / graph.edge_probability());
            let out = karp_partition_tour(graph, &config, seed).map_err(|e| e.to_string())?;
            (out.tour, out.cells_per_axis)
        }
        Heuristic::PosaReduce => (solve_direct(graph, &KarpConfig::default(), seed).map_err(|e| e.to_string())?, 1),
    };
    Ok(TourRun { length: tour.length(), lower_bound: nn_lower_bound(graph).value, cells_per_axis })
}

/// Uniform cloud from `trial_seed/points` with Bernoulli edges from
/// `trial_seed/edges`.
pub fn trial_instance(n: usize, d: usize, p: f64, trial_seed: u64) -> Result<Graph64> {
    let cloud = generate_uniform_cloud(n, d, &RngSeed::new(trial_seed, "points"))?;
    attach_bernoulli_edges(cloud, p, &RngSeed::new(trial_seed, "edges"))
}

/// Master seed of trial `trial` at grid point `point` of `experiment`.
pub fn trial_seed(master: u64, experiment: &str, point: usize, trial: usize) -> u64 {
    RngSeed::new(master, experiment).indexed("point", point as u64).indexed("trial", trial as u64).derive_u64()
}

fn check_grid_positive(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid(format!("{name} grid is empty")));
    }
    if let Some(v) = grid.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(invalid(format!("{name} grid values must be positive, got {v}")));
    }
    Ok(())
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, Median};

use super::report::ExperimentReport;
use super::{check_grid_positive, trial_seed};
use crate::error::{invalid, Result};
use crate::geodesics::excess_sample;
use crate::model::{attach_bernoulli_edges, generate_uniform_cloud, PointCloud};
use crate::rng::RngSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub d: usize,
    pub n: usize,
    /// Multiples `ω` of the pivot `ln^d(n)/n`.
    pub omega_grid: Vec<f64>,
    pub pairs_per_trial: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Pooled statistics at one `ω`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub omega: f64,
    pub p: f64,
    pub clipped: bool,
    /// Median of `d_X − d_E` over reachable pairs; NaN if none.
    pub median_excess: f64,
    /// Median of `d_X / d_E` over reachable pairs; NaN if none.
    pub median_ratio: f64,
    pub unreachable_fraction: f64,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdOutcome {
    pub report: ExperimentReport,
    pub points: Vec<ThresholdPoint>,
}

struct TrialPairs {
    excess: Vec<f64>,
    ratio: Vec<f64>,
    unreachable: usize,
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        Data::new(v.to_vec()).median()
    }
}

/// One trial at `ω` index `i`: the cloud and the pairs depend only on the
/// trial seed, the edges on the trial seed and `i`.
fn run_trial(cfg: &ThresholdConfig, i: usize, p: f64, seed: u64) -> Result<TrialPairs> {
    let cloud: PointCloud<f64> = generate_uniform_cloud(cfg.n, cfg.d, &RngSeed::new(seed, "points"))?;
    let graph = attach_bernoulli_edges(cloud, p, &RngSeed::new(seed, "edges").indexed("omega", i as u64))?;
    let min_sep = 0.25 * (cfg.d as f64).sqrt();
    let samples = excess_sample(&graph, cfg.pairs_per_trial, min_sep, &RngSeed::new(seed, "pairs"))?;
    let reachable: Vec<_> = samples.iter().filter(|s| s.is_reachable()).collect();
    Ok(TrialPairs {
        excess: reachable.iter().map(|s| s.excess()).collect(),
        ratio: reachable.iter().map(|s| s.ratio()).collect(),
        unreachable: samples.len() - reachable.len(),
    })
}

/// Sweeps `p = ω·ln^d(n)/n` over the grid on far pairs (separation at
/// least `0.25·√d`), recording the additive excess and the unreachable
/// fraction. Each trial reuses its cloud and pairs across the grid.
pub fn threshold_scan(cfg: &ThresholdConfig) -> Result<ThresholdOutcome> {
    if cfg.n < 1000 {
        return Err(invalid(format!("threshold scan needs n >= 1000, got {}", cfg.n)));
    }
    if cfg.d == 0 || cfg.trials == 0 || cfg.pairs_per_trial == 0 {
        return Err(invalid("d, trials and pairs per trial must be positive"));
    }
    check_grid_positive("omega", &cfg.omega_grid)?;
    let mut report = ExperimentReport::new(
        "threshold_scan",
        cfg,
        cfg.seed,
        &["omega", "p", "median_excess", "unreachable_fraction", "median_ratio", "reachable"],
    )?;
    let nf = cfg.n as f64;
    let pivot = nf.ln().powi(cfg.d as i32) / nf;
    let mut ps = Vec::with_capacity(cfg.omega_grid.len());
    for &omega in &cfg.omega_grid {
        let raw = omega * pivot;
        if raw > 1.0 {
            report.note(format!("omega {omega}: p = {raw} clipped to 1"));
            log::warn!("omega {omega}: p = {raw} clipped to 1");
        }
        ps.push((raw.min(1.0), raw > 1.0));
    }

    let jobs: Vec<(usize, usize)> =
        (0..cfg.omega_grid.len()).flat_map(|i| (0..cfg.trials).map(move |t| (i, t))).collect();
    let results: Vec<(usize, u64, TrialPairs)> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let seed = trial_seed(cfg.seed, "threshold_scan", 0, t);
            run_trial(cfg, i, ps[i].0, seed).map(|r| (i, seed, r))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(cfg.omega_grid.len());
    for (i, &omega) in cfg.omega_grid.iter().enumerate() {
        let (p, clipped) = ps[i];
        let (mut excess, mut ratio, mut unreachable, mut pairs) = (Vec::new(), Vec::new(), 0, 0);
        for (_, seed, r) in results.iter().filter(|(j, _, _)| *j == i) {
            let total = r.excess.len() + r.unreachable;
            report.push_row(
                *seed,
                vec![
                    omega,
                    p,
                    median(&r.excess),
                    r.unreachable as f64 / total as f64,
                    median(&r.ratio),
                    r.excess.len() as f64,
                ],
            );
            excess.extend_from_slice(&r.excess);
            ratio.extend_from_slice(&r.ratio);
            unreachable += r.unreachable;
            pairs += total;
        }
        points.push(ThresholdPoint {
            omega,
            p,
            clipped,
            median_excess: median(&excess),
            median_ratio: median(&ratio),
            unreachable_fraction: unreachable as f64 / pairs as f64,
            pairs,
        });
    }
    report.aggregate_by("omega", "median_excess")?;
    report.aggregate_by("omega", "unreachable_fraction")?;
    if let Some(cross) = points.windows(2).find(|w| w[0].omega < 1.0 && w[1].omega >= 1.0) {
        report.note(format!(
            "pooled median excess {:.4} at omega {} vs {:.4} at omega {}",
            cross[0].median_excess, cross[0].omega, cross[1].median_excess, cross[1].omega
        ));
    }
    Ok(ThresholdOutcome { report, points })
}

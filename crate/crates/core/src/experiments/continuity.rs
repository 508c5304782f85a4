use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, Median};

use super::report::ExperimentReport;
use super::{run_heuristic, trial_instance, trial_seed, Heuristic};
use crate::error::{invalid, Result};
use crate::rng::RngSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityConfig {
    pub d: usize,
    pub p: f64,
    pub n: usize,
    /// Relative increments `δ`; `k = round(δ·n)` points are added.
    pub delta_grid: Vec<f64>,
    pub trials: usize,
    pub heuristic: Heuristic,
    pub k0: f64,
    pub seed: u64,
    /// Reference level for the normalized excess.
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityPoint {
    pub delta: f64,
    pub k: usize,
    pub median_excess: f64,
    /// Fraction of successful trials with normalized excess below `epsilon`.
    pub fraction_below: f64,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityOutcome {
    pub report: ExperimentReport,
    pub points: Vec<ContinuityPoint>,
}

/// `(T(n+k) − T(n)) / n^((d−1)/d)` on nested prefixes of one instance per
/// trial, each prefix toured by the same heuristic with the same seed.
pub fn continuity_check(cfg: &ContinuityConfig) -> Result<ContinuityOutcome> {
    if cfg.d == 0 || cfg.trials == 0 || cfg.n < 2 {
        return Err(invalid("d and trials must be positive and n at least 2"));
    }
    if cfg.delta_grid.is_empty() || cfg.delta_grid.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(invalid("delta grid must be nonempty and nonnegative"));
    }
    let ks: Vec<usize> = cfg.delta_grid.iter().map(|d| (d * cfg.n as f64).round() as usize).collect();
    let n_max = cfg.n + ks.iter().max().copied().unwrap_or(0);
    let norm = (cfg.n as f64).powf((cfg.d as f64 - 1.0) / cfg.d as f64);
    let mut report =
        ExperimentReport::new("continuity_check", cfg, cfg.seed, &["delta", "k", "T_n", "T_n_plus_k", "excess"])?;

    let trials: Vec<(u64, Vec<Vec<f64>>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(cfg.seed, "continuity_check", 0, t);
            let full = trial_instance(n_max, cfg.d, cfg.p, s)?;
            let tour_seed = RngSeed::new(s, "tour");
            let length = |m: usize| {
                let g = full.prefix(m);
                run_heuristic(&g, cfg.heuristic, cfg.k0, &tour_seed).map(|r| r.length).unwrap_or(f64::NAN)
            };
            let base = length(cfg.n);
            let rows = cfg
                .delta_grid
                .iter()
                .zip(&ks)
                .map(|(&delta, &k)| {
                    let grown = if k == 0 { base } else { length(cfg.n + k) };
                    vec![delta, k as f64, base, grown, (grown - base) / norm]
                })
                .collect();
            Ok((s, rows))
        })
        .collect::<Result<_>>()?;
    for (s, rows) in trials {
        for values in rows {
            report.push_row(s, values);
        }
    }
    report.aggregate_by("delta", "excess")?;

    let mut points = Vec::new();
    for (i, (&delta, &k)) in cfg.delta_grid.iter().zip(&ks).enumerate() {
        let excess: Vec<f64> = report.rows.iter().skip(i).step_by(cfg.delta_grid.len()).map(|r| r.values[4]).collect();
        let ok: Vec<f64> = excess.iter().copied().filter(|e| e.is_finite()).collect();
        let median_excess = if ok.is_empty() { f64::NAN } else { Data::new(ok.clone()).median() };
        let below = ok.iter().filter(|&&e| e < cfg.epsilon).count();
        points.push(ContinuityPoint {
            delta,
            k,
            median_excess,
            fraction_below: below as f64 / ok.len().max(1) as f64,
            failures: excess.len() - ok.len(),
        });
    }
    Ok(ContinuityOutcome { report, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_increment_is_exact_and_small_steps_stay_small() {
        let cfg = ContinuityConfig {
            d: 2,
            p: 0.5,
            n: 1024,
            delta_grid: vec![0.0, 0.01, 0.1, 0.5],
            trials: 6,
            heuristic: Heuristic::KarpPartition,
            k0: 2.0,
            seed: 8,
            epsilon: 0.5,
        };
        let out = continuity_check(&cfg).unwrap();
        assert_eq!(out.points[0].median_excess, 0.0);
        assert!(out.report.column("excess").unwrap().iter().step_by(4).all(|&e| e == 0.0));
        assert!(out.points[1].fraction_below >= 0.9, "{:?}", out.points[1]);
        let m: Vec<f64> = out.points.iter().map(|p| p.median_excess).collect();
        assert!(m[3] > m[1], "{m:?}");
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::ExperimentReport;
use super::stats::{least_squares, Fit, Summary};
use super::{run_heuristic, trial_instance, trial_seed, Heuristic};
use crate::error::{invalid, Error, Result};
use crate::rng::RngSeed;

/// Grid points with more failed trials than this are left out of fits.
pub const MAX_FAILURE_FRACTION: f64 = 0.2;

const COLUMNS: [&str; 8] = ["n", "p", "T", "lower_bound", "cells_per_axis", "failed", "T_sentinel", "ratio"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sweep", rename_all = "snake_case")]
pub enum Sweep {
    /// Vary `n` at fixed `p`.
    N { p: f64, n_grid: Vec<usize> },
    /// Vary `p` at fixed `n`.
    P { n: usize, p_grid: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub d: usize,
    pub sweep: Sweep,
    pub trials: usize,
    pub heuristic: Heuristic,
    /// Density constant scale: the partition uses `K = k0 / p`.
    pub k0: f64,
    pub seed: u64,
    /// Also aggregate with failed trials counted as `n²`.
    pub paper_convention: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub p: f64,
    pub successes: usize,
    pub failures: usize,
    pub usable: bool,
    /// Tour length over successful trials.
    pub length: Summary,
    /// `T / n^((d−1)/d)` over successful trials.
    pub ratio: Summary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingOutcome {
    pub report: ExperimentReport,
    pub points: Vec<GridPoint>,
    pub fit: Fit,
    pub lower_bound_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaConfig {
    pub d: usize,
    pub p: f64,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub heuristic: Heuristic,
    pub k0: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaOutcome {
    pub report: ExperimentReport,
    pub points: Vec<GridPoint>,
    /// `|r₁ − r₂| / r₂` for the mean ratios at the two largest usable `n`.
    pub relative_change: f64,
    /// Whether the bootstrap intervals at those two `n` overlap.
    pub intervals_overlap: bool,
    /// Mean ratio at the largest usable `n`.
    pub beta_hat: f64,
    pub lower_bound_violations: usize,
}

/// Rejects grids that cannot support a log-log fit: fewer than two
/// distinct values is a degenerate fit, fewer than four points or uneven
/// ratios an invalid grid.
fn check_geometric(name: &str, grid: &[f64]) -> Result<()> {
    let mut distinct = grid.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::DegenerateFit(format!("{name} grid has {} distinct value(s)", distinct.len())));
    }
    if grid.len() < 4 {
        return Err(invalid(format!("{name} grid needs at least 4 points, got {}", grid.len())));
    }
    if grid.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid(format!("{name} grid values must be positive")));
    }
    let ratio = grid[1] / grid[0];
    let geometric = ratio > 1.0 && grid.windows(2).all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-6);
    if !geometric {
        return Err(invalid(format!("{name} grid must be increasing with a constant ratio: {grid:?}")));
    }
    Ok(())
}

struct GridRun {
    report: ExperimentReport,
    points: Vec<GridPoint>,
    violations: usize,
}

struct GridSpec<'a> {
    experiment: &'a str,
    d: usize,
    grid: &'a [(usize, f64)],
    trials: usize,
    heuristic: Heuristic,
    k0: f64,
    seed: u64,
    sentinel: bool,
}

fn run_grid(spec: GridSpec<'_>, params: &impl Serialize) -> Result<GridRun> {
    let GridSpec { experiment, d, grid, trials, heuristic, k0, seed, sentinel } = spec;
    if d == 0 || trials == 0 {
        return Err(invalid("d and trials must be positive"));
    }
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(invalid(format!("k0 must be positive, got {k0}")));
    }
    if let Some(&(n, p)) = grid.iter().find(|(n, p)| *n < 2 || !(*p > 0.0 && *p <= 1.0)) {
        return Err(invalid(format!("grid point n = {n}, p = {p} is out of range")));
    }
    let mut report = ExperimentReport::new(experiment, params, seed, &COLUMNS)?;
    let exponent = (d as f64 - 1.0) / d as f64;
    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (0..trials).map(move |t| (i, t))).collect();
    let rows: Vec<(u64, Vec<f64>)> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let (n, p) = grid[i];
            let s = trial_seed(seed, experiment, i, t);
            let graph = trial_instance(n, d, p, s)?;
            let run = run_heuristic(&graph, heuristic, k0, &RngSeed::new(s, "tour"));
            let nf = n as f64;
            let values = match run {
                Ok(r) => {
                    log::debug!("{experiment}: n={n} p={p} trial {t}: T={:.4}", r.length);
                    vec![
                        nf,
                        p,
                        r.length,
                        r.lower_bound,
                        r.cells_per_axis as f64,
                        0.0,
                        r.length,
                        r.length / nf.powf(exponent),
                    ]
                }
                Err(msg) => {
                    log::warn!("{experiment}: n={n} p={p} trial {t} failed: {msg}");
                    let lb = crate::construct::nn_lower_bound(&graph).value;
                    vec![nf, p, f64::NAN, lb, f64::NAN, 1.0, nf * nf, f64::NAN]
                }
            };
            Ok((s, values))
        })
        .collect::<Result<_>>()?;
    let mut violations = 0;
    for (s, values) in rows {
        if values[5] == 0.0 && values[3] > values[2] + super::LOWER_BOUND_SLACK {
            violations += 1;
        }
        report.push_row(s, values);
    }
    let key = match grid.windows(2).all(|w| w[0].0 == w[1].0) {
        true => "p",
        false => "n",
    };
    report.aggregate_by(key, "T")?;
    report.aggregate_by(key, "ratio")?;
    if sentinel {
        report.aggregate_by(key, "T_sentinel")?;
    }
    let mut points = Vec::with_capacity(grid.len());
    for (i, &(n, p)) in grid.iter().enumerate() {
        let rows = &report.rows[i * trials..(i + 1) * trials];
        let failures = rows.iter().filter(|r| r.values[5] != 0.0).count();
        let usable = failures as f64 <= MAX_FAILURE_FRACTION * trials as f64;
        if !usable {
            report.note(format!("n = {n}, p = {p}: {failures}/{trials} trials failed; point unusable"));
        }
        let key_value = if key == "n" { n as f64 } else { p };
        points.push(GridPoint {
            n,
            p,
            successes: trials - failures,
            failures,
            usable,
            length: report.aggregate(key, key_value, "T").expect("aggregated").clone(),
            ratio: report.aggregate(key, key_value, "ratio").expect("aggregated").clone(),
        });
    }
    if violations > 0 {
        report.note(format!("{violations} tours shorter than the nearest-neighbor bound"));
    }
    Ok(GridRun { report, points, violations })
}

/// Tour length across a geometric grid in `n` or `p`, with a least-squares
/// fit of `log T` on `log n` (or `log p`) over successful trials at usable
/// grid points.
pub fn scaling_fit(cfg: &ScalingConfig) -> Result<ScalingOutcome> {
    let (grid, fit_name, by_n): (Vec<(usize, f64)>, &str, bool) = match &cfg.sweep {
        Sweep::N { p, n_grid } => {
            check_geometric("n", &n_grid.iter().map(|&n| n as f64).collect::<Vec<_>>())?;
            (n_grid.iter().map(|&n| (n, *p)).collect(), "log_T_vs_log_n", true)
        }
        Sweep::P { n, p_grid } => {
            check_geometric("p", p_grid)?;
            (p_grid.iter().map(|&p| (*n, p)).collect(), "log_T_vs_log_p", false)
        }
    };
    let spec = GridSpec {
        experiment: "scaling_fit",
        d: cfg.d,
        grid: &grid,
        trials: cfg.trials,
        heuristic: cfg.heuristic,
        k0: cfg.k0,
        seed: cfg.seed,
        sentinel: cfg.paper_convention,
    };
    let GridRun { mut report, points, violations } = run_grid(spec, cfg)?;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, point) in points.iter().enumerate().filter(|(_, pt)| pt.usable) {
        for row in &report.rows[i * cfg.trials..(i + 1) * cfg.trials] {
            if row.values[5] == 0.0 {
                x.push(if by_n { point.n as f64 } else { point.p }.ln());
                y.push(row.values[2].ln());
            }
        }
    }
    let fit = least_squares(fit_name, &x, &y)?;
    report.note(format!("{fit_name}: slope {:.4} ± {:.4}", fit.slope, fit.slope_stderr));
    report.fits.push(fit.clone());
    Ok(ScalingOutcome { report, points, fit, lower_bound_violations: violations })
}

/// `T / n^((d−1)/d)` across an `n` grid; the change between the two
/// largest usable `n` measures convergence.
pub fn estimate_beta(cfg: &BetaConfig) -> Result<BetaOutcome> {
    check_geometric("n", &cfg.n_grid.iter().map(|&n| n as f64).collect::<Vec<_>>())?;
    let grid: Vec<(usize, f64)> = cfg.n_grid.iter().map(|&n| (n, cfg.p)).collect();
    let spec = GridSpec {
        experiment: "estimate_beta",
        d: cfg.d,
        grid: &grid,
        trials: cfg.trials,
        heuristic: cfg.heuristic,
        k0: cfg.k0,
        seed: cfg.seed,
        sentinel: false,
    };
    let GridRun { mut report, points, violations } = run_grid(spec, cfg)?;
    let usable: Vec<&GridPoint> = points.iter().filter(|p| p.usable).collect();
    if usable.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} usable grid point(s); need two", usable.len())));
    }
    let (a, b) = (&usable[usable.len() - 2].ratio, &usable[usable.len() - 1].ratio);
    let relative_change = (a.mean - b.mean).abs() / b.mean;
    let intervals_overlap = a.overlaps(b);
    report.note(format!(
        "ratio {:.4} at n = {} vs {:.4} at n = {}: relative change {:.4}, intervals overlap: {intervals_overlap}",
        a.mean,
        usable[usable.len() - 2].n,
        b.mean,
        usable[usable.len() - 1].n,
        relative_change
    ));
    Ok(BetaOutcome {
        report,
        beta_hat: b.mean,
        points,
        relative_change,
        intervals_overlap,
        lower_bound_violations: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_sweep(n_grid: Vec<usize>) -> ScalingConfig {
        ScalingConfig {
            d: 2,
            sweep: Sweep::N { p: 1.0, n_grid },
            trials: 2,
            heuristic: Heuristic::KarpPartition,
            k0: 2.0,
            seed: 1,
            paper_convention: true,
        }
    }

    #[test]
    fn grid_validation() {
        let err = scaling_fit(&n_sweep(vec![512])).unwrap_err();
        assert!(err.to_string().starts_with("degenerate fit"), "{err}");
        let err = scaling_fit(&n_sweep(vec![512, 512, 512, 512])).unwrap_err();
        assert!(err.to_string().starts_with("degenerate fit"), "{err}");
        assert!(matches!(scaling_fit(&n_sweep(vec![256, 512, 1024])), Err(Error::InvalidParameter(_))));
        assert!(matches!(scaling_fit(&n_sweep(vec![256, 512, 1024, 4096])), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn small_n_sweep_has_sqrt_shape() {
        let out = scaling_fit(&n_sweep(vec![256, 512, 1024, 2048])).unwrap();
        assert_eq!(out.lower_bound_violations, 0);
        assert!(out.points.iter().all(|p| p.usable && p.failures == 0));
        assert!(out.fit.slope_within(0.5, 0.15), "{:?}", out.fit);
        assert_eq!(out.report.rows.len(), 8);
        assert!(out.report.aggregate("n", 256.0, "T_sentinel").is_some());
        assert_eq!(out.report.recompute_aggregates().unwrap(), out.report.aggregates);
    }

    #[test]
    fn rows_reproduce_from_their_seed() {
        let cfg = n_sweep(vec![64, 128, 256, 512]);
        let out = scaling_fit(&cfg).unwrap();
        let row = &out.report.rows[5];
        let g = trial_instance(256, 2, 1.0, row.seed).unwrap();
        let run = run_heuristic(&g, cfg.heuristic, cfg.k0, &RngSeed::new(row.seed, "tour")).unwrap();
        assert_eq!(run.length.to_bits(), row.values[2].to_bits());
        assert_eq!(scaling_fit(&cfg).unwrap().report, out.report);
    }

    #[test]
    fn failures_are_counted_and_flagged() {
        // Far below connectivity: every trial fails.
        let cfg =
            ScalingConfig { sweep: Sweep::P { n: 300, p_grid: vec![0.001, 0.002, 0.004, 0.008] }, ..n_sweep(vec![]) };
        let err = scaling_fit(&cfg).unwrap_err();
        assert!(err.to_string().starts_with("degenerate fit"), "{err}");
    }

    #[test]
    fn beta_statistic() {
        let cfg = BetaConfig {
            d: 2,
            p: 1.0,
            n_grid: vec![256, 512, 1024, 2048],
            trials: 3,
            heuristic: Heuristic::KarpPartition,
            k0: 2.0,
            seed: 2,
        };
        let out = estimate_beta(&cfg).unwrap();
        assert!(out.relative_change.is_finite());
        assert!(out.beta_hat > 0.5 && out.beta_hat < 1.5, "{}", out.beta_hat);
    }
}

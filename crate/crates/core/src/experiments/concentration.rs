use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::ExperimentReport;
use super::stats::{least_squares, Fit};
use super::trial_seed;
use crate::error::{invalid, Result};
use crate::model::{generate_block_cloud, BlockProcess, PointCloud};
use crate::rng::RngSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationConfig {
    pub process: BlockProcess,
    pub d: usize,
    /// Block counts `N`; each must be a perfect `d`-th power.
    pub block_grid: Vec<usize>,
    pub trials: usize,
    /// Relative deviation `δ` in `|T_N − μN| > δ·μN`.
    pub delta: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailPoint {
    pub blocks: usize,
    pub trials: usize,
    pub exceed: usize,
    pub probability: f64,
    /// `ln` of the probability; `-inf` when no trial exceeded.
    pub log_probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationOutcome {
    pub report: ExperimentReport,
    pub points: Vec<TailPoint>,
    /// Whether the log tail strictly decreases along the grid, with
    /// `ln 0 = −∞` and `−∞` not below itself.
    pub strictly_decreasing: bool,
    /// `ln Pr` against `N` over grid points with a nonzero estimate.
    pub fit: Option<Fit>,
}

fn side(blocks: usize, d: usize) -> Result<usize> {
    let t = (blocks as f64).powf(1.0 / d as f64).round() as usize;
    if t.checked_pow(d as u32) != Some(blocks) {
        return Err(invalid(format!("{blocks} blocks is not a perfect {d}-th power")));
    }
    Ok(t)
}

/// Empirical `Pr(|T_N − μN| > δ·μN)` for the point count `T_N` of `N`
/// independent blocks, laid out as a `t^d` grid with `t = N^(1/d)`.
pub fn concentration_check(cfg: &ConcentrationConfig) -> Result<ConcentrationOutcome> {
    cfg.process.validate()?;
    if cfg.d == 0 || cfg.trials == 0 || cfg.block_grid.is_empty() {
        return Err(invalid("d, trials and the block grid must be nonempty"));
    }
    if !(cfg.delta > 0.0 && cfg.delta.is_finite()) {
        return Err(invalid(format!("delta must be positive, got {}", cfg.delta)));
    }
    let sides: Vec<usize> = cfg.block_grid.iter().map(|&b| side(b, cfg.d)).collect::<Result<_>>()?;
    let mu = cfg.process.mean();
    let mut report = ExperimentReport::new("concentration_check", cfg, cfg.seed, &["blocks", "count", "exceeds"])?;
    let mut points = Vec::with_capacity(sides.len());
    for (i, (&blocks, &t)) in cfg.block_grid.iter().zip(&sides).enumerate() {
        let expected = mu * blocks as f64;
        let rows: Vec<(u64, f64, bool)> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let s = trial_seed(cfg.seed, "concentration_check", i, trial);
                let cloud: PointCloud<f64> = generate_block_cloud(t, cfg.d, &cfg.process, &RngSeed::new(s, "points"))?;
                let count = cloud.len() as f64;
                Ok((s, count, (count - expected).abs() > cfg.delta * expected))
            })
            .collect::<Result<_>>()?;
        let exceed = rows.iter().filter(|r| r.2).count();
        for (s, count, hit) in rows {
            report.push_row(s, vec![blocks as f64, count, f64::from(u8::from(hit))]);
        }
        let probability = exceed as f64 / cfg.trials as f64;
        points.push(TailPoint { blocks, trials: cfg.trials, exceed, probability, log_probability: probability.ln() });
    }
    report.aggregate_by("blocks", "count")?;
    report.aggregate_by("blocks", "exceeds")?;

    let strictly_decreasing = points.windows(2).all(|w| w[1].log_probability < w[0].log_probability);
    let nonzero: Vec<&TailPoint> = points.iter().filter(|p| p.exceed > 0).collect();
    let fit = if nonzero.len() >= 2 {
        let x: Vec<f64> = nonzero.iter().map(|p| p.blocks as f64).collect();
        let y: Vec<f64> = nonzero.iter().map(|p| p.log_probability).collect();
        let fit = least_squares("log_tail_vs_blocks", &x, &y)?;
        report.note(format!("log tail slope {:.5} ± {:.5} per block", fit.slope, fit.slope_stderr));
        report.fits.push(fit.clone());
        Some(fit)
    } else {
        report.note(format!("{} grid point(s) with a nonzero tail estimate; no fit", nonzero.len()));
        None
    };
    for p in &points {
        report.note(format!("N = {}: {}/{} trials beyond the band", p.blocks, p.exceed, p.trials));
    }
    report.note(format!("log tail strictly decreasing: {strictly_decreasing}"));
    Ok(ConcentrationOutcome { report, points, strictly_decreasing, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(process: BlockProcess, block_grid: Vec<usize>, trials: usize) -> ConcentrationConfig {
        ConcentrationConfig { process, d: 2, block_grid, trials, delta: 0.5, seed: 3 }
    }

    #[test]
    fn fixed_grid_never_deviates() {
        let out = concentration_check(&config(BlockProcess::FixedGrid, vec![4, 16, 64], 50)).unwrap();
        assert!(out.points.iter().all(|p| p.exceed == 0 && p.probability == 0.0));
        assert!(!out.strictly_decreasing);
        assert!(out.fit.is_none());
    }

    #[test]
    fn poisson_tail_falls_with_n() {
        let out = concentration_check(&config(BlockProcess::unit_poisson(), vec![1, 4, 16], 4000)).unwrap();
        let p: Vec<f64> = out.points.iter().map(|p| p.probability).collect();
        // Pr(|Poisson(N) − N| > N/2) is 1 − 1/e ≈ 0.632, 0.202 and 0.032
        // for N = 1, 4, 16.
        assert!(p[0] > p[1] && p[1] > p[2], "{p:?}");
        for (got, want) in p.iter().zip([0.6321, 0.2022, 0.0323]) {
            assert!((got - want).abs() < 0.03, "{p:?}");
        }
        assert!(out.fit.as_ref().unwrap().slope < 0.0);
    }

    #[test]
    fn intensity_rescales_the_band() {
        let out = concentration_check(&config(BlockProcess::UnitPoisson { intensity: 2.0 }, vec![4], 500)).unwrap();
        let counts = out.report.column("count").unwrap();
        let flags = out.report.column("exceeds").unwrap();
        for (c, f) in counts.iter().zip(flags) {
            assert_eq!(f == 1.0, (c - 8.0).abs() > 4.0);
        }
    }

    #[test]
    fn non_power_rejected() {
        assert!(concentration_check(&config(BlockProcess::unit_poisson(), vec![10], 5)).is_err());
    }
}

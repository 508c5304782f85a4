use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, Median, OrderStatistics, Statistics};

use crate::error::{Error, Result};
use crate::rng::RngSeed;

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Mean, median and a percentile-bootstrap 95% interval for the mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Summary {
    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    pub fn overlaps(&self, other: &Summary) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// Summarizes `values`; the bootstrap draws come from `seed`, so the same
/// inputs always give the same interval. Empty input yields NaNs.
pub fn summarize(values: &[f64], seed: &RngSeed) -> Summary {
    let count = values.len();
    if count == 0 {
        return Summary { count, mean: f64::NAN, median: f64::NAN, ci_low: f64::NAN, ci_high: f64::NAN };
    }
    let mean = values.mean();
    let median = Data::new(values.to_vec()).median();
    let (ci_low, ci_high) = bootstrap_ci(values, BOOTSTRAP_RESAMPLES, seed);
    Summary { count, mean, median, ci_low, ci_high }
}

/// Percentile interval `[q_0.025, q_0.975]` of `resamples` bootstrap means.
pub fn bootstrap_ci(values: &[f64], resamples: usize, seed: &RngSeed) -> (f64, f64) {
    let n = values.len();
    if n == 0 || resamples == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mut rng = seed.rng();
    let means: Vec<f64> =
        (0..resamples).map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64).collect();
    let mut data = Data::new(means);
    (data.quantile(0.025), data.quantile(0.975))
}

/// Ordinary least squares `y = intercept + slope·x` with the usual
/// standard errors (`σ̂² = RSS/(k−2)`); standard errors are NaN for two
/// points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub name: String,
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

impl Fit {
    /// Whether `target` lies within `tolerance` of the slope.
    pub fn slope_within(&self, target: f64, tolerance: f64) -> bool {
        (self.slope - target).abs() <= tolerance
    }
}

pub fn least_squares(name: &str, x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!("{} x values but {} y values", x.len(), y.len())));
    }
    let k = x.len();
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{name}: need at least two distinct x values, got {}",
            distinct.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name}: non-finite value in fit data")));
    }
    let kf = k as f64;
    let mx = x.iter().sum::<f64>() / kf;
    let my = y.iter().sum::<f64>() / kf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - intercept - slope * a).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let (slope_stderr, intercept_stderr) = if k > 2 {
        let sigma2 = rss / (kf - 2.0);
        ((sigma2 / sxx).sqrt(), (sigma2 * (1.0 / kf + mx * mx / sxx)).sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };
    let r_squared = if syy > 0.0 { 1.0 - rss / syy } else { 1.0 };
    Ok(Fit { name: name.to_owned(), points: k, slope, intercept, slope_stderr, intercept_stderr, r_squared, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Solves `(XᵀX) β = Xᵀy` directly and reads the covariance off
    /// `σ̂²(XᵀX)⁻¹`.
    fn normal_equations(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
        let k = x.len() as f64;
        let (s1, sx, sxx) = (k, x.iter().sum::<f64>(), x.iter().map(|a| a * a).sum::<f64>());
        let (sy, sxy) = (y.iter().sum::<f64>(), x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>());
        let det = s1 * sxx - sx * sx;
        let inv = [[sxx / det, -sx / det], [-sx / det, s1 / det]];
        let b0 = inv[0][0] * sy + inv[0][1] * sxy;
        let b1 = inv[1][0] * sy + inv[1][1] * sxy;
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - b0 - b1 * a).powi(2)).sum();
        let s2 = rss / (k - 2.0);
        (b1, b0, (s2 * inv[1][1]).sqrt(), (s2 * inv[0][0]).sqrt())
    }

    #[test]
    fn matches_normal_equations() {
        let x = [11.0f64, 12.0, 13.0, 14.0, 15.0].map(|e| e * 2f64.ln());
        let y = [3.41, 3.77, 4.10, 4.46, 4.79];
        let fit = least_squares("fixture", &x, &y).unwrap();
        let (b1, b0, se1, se0) = normal_equations(&x, &y);
        assert!((fit.slope - b1).abs() < 1e-9);
        assert!((fit.intercept - b0).abs() < 1e-9);
        assert!((fit.slope_stderr - se1).abs() < 1e-9);
        assert!((fit.intercept_stderr - se0).abs() < 1e-9);
        assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn exact_line() {
        let fit = least_squares("line", &[1.0, 2.0, 3.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept + 1.0).abs() < 1e-12);
        assert!(fit.slope_stderr.abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_is_degenerate() {
        let err = least_squares("one", &[2.0, 2.0], &[1.0, 1.5]).unwrap_err();
        assert!(err.to_string().starts_with("degenerate fit"), "{err}");
    }

    #[test]
    fn bootstrap_is_seeded_and_narrows() {
        let seed = RngSeed::new(3, "boot");
        let mut rng = RngSeed::new(4, "data").rng();
        let small: Vec<f64> = (0..20).map(|_| rng.random::<f64>()).collect();
        let large: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let a = summarize(&small, &seed);
        assert_eq!(a, summarize(&small, &seed));
        assert!(a.ci_low <= a.mean && a.mean <= a.ci_high);
        let b = summarize(&large, &seed);
        assert!(b.ci_width() < a.ci_width());
        assert!(summarize(&[], &seed).mean.is_nan());
    }
}

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::PointCloud;
use crate::rng::RngSeed;
use crate::scalar::Scalar;

/// The point process run inside each unit block `x + [0,1]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BlockProcess {
    /// Poisson number of uniform points with the given mean.
    UnitPoisson { intensity: f64 },
    /// The block center, kept with probability `rho`.
    BernoulliCenter { rho: f64 },
    /// Always the block center.
    FixedGrid,
}

impl BlockProcess {
    pub fn unit_poisson() -> Self {
        Self::UnitPoisson { intensity: 1.0 }
    }

    /// Expected number of points per block.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::UnitPoisson { intensity } => intensity,
            Self::BernoulliCenter { rho } => rho,
            Self::FixedGrid => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::UnitPoisson { intensity } if !(intensity > 0.0 && intensity.is_finite()) => {
                Err(invalid(format!("poisson intensity must be positive, got {intensity}")))
            }
            Self::BernoulliCenter { rho } if !(rho > 0.0 && rho <= 1.0) => {
                Err(invalid(format!("retention probability must be in (0,1], got {rho}")))
            }
            _ => Ok(()),
        }
    }

    fn sample_count<R: Rng>(&self, poisson: Option<&Poisson<f64>>, rng: &mut R) -> usize {
        match *self {
            Self::UnitPoisson { .. } => poisson.expect("poisson initialised").sample(rng) as usize,
            Self::BernoulliCenter { rho } => usize::from(rng.random_bool(rho)),
            Self::FixedGrid => 1,
        }
    }
}

impl std::fmt::Display for BlockProcess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::UnitPoisson { intensity } => write!(f, "unit-poisson({intensity})"),
            Self::BernoulliCenter { rho } => write!(f, "bernoulli-center({rho})"),
            Self::FixedGrid => write!(f, "fixed-grid"),
        }
    }
}

/// Union of independent copies of `process` translated to every block
/// `x ∈ {0,…,t−1}^d`, in `[0, t]^d`.
///
/// Blocks are visited in lexicographic order with axis 0 fastest.
pub fn generate_block_cloud<S: Scalar>(
    t: usize,
    d: usize,
    process: &BlockProcess,
    seed: &RngSeed,
) -> Result<PointCloud<S>> {
    if t == 0 {
        return Err(invalid("side length t must be at least 1"));
    }
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    process.validate()?;
    let blocks = t.checked_pow(d as u32).ok_or_else(|| invalid(format!("{t}^{d} blocks overflow")))?;
    let poisson = match *process {
        BlockProcess::UnitPoisson { intensity } => Some(Poisson::new(intensity).map_err(|e| invalid(e.to_string()))?),
        _ => None,
    };
    let mut rng = seed.rng();
    let scale = S::of(t as f64);
    let mut coords = Vec::new();
    let mut corner = vec![0usize; d];
    for _ in 0..blocks {
        let count = process.sample_count(poisson.as_ref(), &mut rng);
        for _ in 0..count {
            for &c in &corner {
                let offset = match process {
                    BlockProcess::UnitPoisson { .. } => rng.random::<f64>(),
                    _ => 0.5,
                };
                coords.push(S::of(c as f64 + offset).min(scale));
            }
        }
        for c in corner.iter_mut() {
            *c += 1;
            if *c < t {
                break;
            }
            *c = 0;
        }
    }
    PointCloud::new(d, scale, coords)
}

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::rng::RngSeed;
use crate::scalar::Scalar;

/// Points in `[0, t]^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud<S> {
    dim: usize,
    scale: S,
    coords: Vec<S>,
}

impl<S: Scalar> PointCloud<S> {
    /// Builds a cloud from flat row-major coordinates, checking every
    /// coordinate lies in `[0, scale]`.
    pub fn new(dim: usize, scale: S, coords: Vec<S>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if !(scale > S::zero()) || !scale.is_finite() {
            return Err(invalid(format!("scale must be positive and finite, got {scale}")));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(invalid(format!("{} coordinates do not split into {dim}-vectors", coords.len())));
        }
        if let Some(i) = coords.iter().position(|&c| !(c >= S::zero() && c <= scale)) {
            return Err(invalid(format!(
                "coordinate {} of point {} is {}, outside [0, {scale}]",
                i % dim,
                i / dim,
                coords[i]
            )));
        }
        Ok(Self { dim, scale, coords })
    }

    pub fn from_points(dim: usize, scale: S, points: &[Vec<S>]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(invalid(format!("point {p:?} is not {dim}-dimensional")));
        }
        Self::new(dim, scale, points.concat())
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim: dim.max(1), scale: S::one(), coords: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> S {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[S] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[S]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Euclidean distance between points `i` and `j` (unchecked indices).
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> S {
        let (a, b) = (self.point(i), self.point(j));
        a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<S>().sqrt()
    }

    pub fn checked_distance(&self, i: usize, j: usize) -> Result<S> {
        let len = self.len();
        for index in [i, j] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        Ok(self.distance(i, j))
    }

    /// The first `k` points. Generating once at the largest size and taking
    /// prefixes gives nested instances.
    pub fn prefix(&self, k: usize) -> Self {
        let k = k.min(self.len());
        Self { dim: self.dim, scale: self.scale, coords: self.coords[..k * self.dim].to_vec() }
    }

    /// The listed points, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self { dim: self.dim, scale: self.scale, coords }
    }
}

/// `n` points i.i.d. uniform in the unit cube `[0,1]^d`.
pub fn generate_uniform_cloud<S: Scalar>(n: usize, d: usize, seed: &RngSeed) -> Result<PointCloud<S>> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let mut rng = seed.rng();
    let coords = (0..n * d).map(|_| S::of(rng.random::<f64>())).collect();
    PointCloud::new(d, S::one(), coords)
}

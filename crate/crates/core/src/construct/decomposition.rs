use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::model::PointCloud;
use crate::scalar::Scalar;

/// Breakpoints along one axis: cells below `threshold` have side `u`,
/// the rest side `u + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisSplit {
    pub extent: u64,
    pub threshold: usize,
}

/// Tiling of an integer box into `m^d` near-cubes with sides in
/// `{u, u+1}`.
///
/// Cell `α` (zero-based) spans `[f_b(α_b), f_b(α_b + 1))` on axis `b`,
/// where `f_b(a) = a·u` for `a < M_b` and `a·u + (a − M_b)` otherwise.
/// Region units map to cloud coordinates through `length_per_unit`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    dim: usize,
    cells_per_axis: usize,
    base_side: u64,
    axes: Vec<AxisSplit>,
    length_per_unit: f64,
    /// Whether `u < sqrt(t)` holds, `t` the largest extent.
    pub sqrt_condition: bool,
}

/// Decomposes the box `∏ [0, extent_b]` into `m` cells per axis. The
/// `extent − m·u` cells of side `u + 1` go at the high end of each axis.
pub fn near_cube_decomposition(extents: &[u64], m: usize) -> Result<Decomposition> {
    if extents.is_empty() {
        return Err(invalid("need at least one axis"));
    }
    if m == 0 {
        return Err(invalid("cells per axis must be at least 1"));
    }
    let mm = m as u64;
    let smallest = *extents.iter().min().expect("nonempty");
    let u = smallest / mm;
    if let Some(axis) = extents.iter().position(|&e| e < mm) {
        return Err(Error::Decomposition {
            axis,
            reason: format!("extent {} is smaller than {m} cells", extents[axis]),
        });
    }
    let mut axes = Vec::with_capacity(extents.len());
    for (axis, &extent) in extents.iter().enumerate() {
        if extent > mm * (u + 1) {
            return Err(Error::Decomposition {
                axis,
                reason: format!("extent {extent} exceeds {m} cells of side {}", u + 1),
            });
        }
        let wide = (extent - mm * u) as usize;
        axes.push(AxisSplit { extent, threshold: m - wide });
    }
    let largest = *extents.iter().max().expect("nonempty");
    Ok(Decomposition {
        dim: extents.len(),
        cells_per_axis: m,
        base_side: u,
        axes,
        length_per_unit: 1.0,
        sqrt_condition: (u as f64) < (largest as f64).sqrt(),
    })
}

impl Decomposition {
    /// Scales region units to cloud coordinates.
    pub fn with_unit(mut self, length_per_unit: f64) -> Self {
        self.length_per_unit = length_per_unit;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn base_side(&self) -> u64 {
        self.base_side
    }

    pub fn axes(&self) -> &[AxisSplit] {
        &self.axes
    }

    pub fn cell_count(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }

    /// `f_b(a)` for `a` in `0..=m`.
    pub fn breakpoint(&self, axis: usize, a: usize) -> u64 {
        let AxisSplit { threshold, .. } = self.axes[axis];
        let base = a as u64 * self.base_side;
        if a < threshold {
            base
        } else {
            base + (a - threshold) as u64
        }
    }

    pub fn breakpoints(&self, axis: usize) -> Vec<u64> {
        (0..=self.cells_per_axis).map(|a| self.breakpoint(axis, a)).collect()
    }

    /// Linear index with axis 0 varying fastest.
    pub fn linear_index(&self, alpha: &[usize]) -> usize {
        alpha.iter().rev().fold(0, |acc, &a| acc * self.cells_per_axis + a)
    }

    pub fn multi_index(&self, mut linear: usize) -> Vec<usize> {
        (0..self.dim)
            .map(|_| {
                let a = linear % self.cells_per_axis;
                linear /= self.cells_per_axis;
                a
            })
            .collect()
    }

    fn locate_axis(&self, axis: usize, x: f64) -> Option<usize> {
        let AxisSplit { extent, threshold } = self.axes[axis];
        let units = x / self.length_per_unit;
        let slack = 1e-9 * (extent as f64).max(1.0);
        if !(units >= -slack && units <= extent as f64 + slack) {
            return None;
        }
        let u = self.base_side as f64;
        let narrow_end = threshold as f64 * u;
        let a = if units < narrow_end {
            (units.max(0.0) / u).floor() as usize
        } else {
            threshold + ((units - narrow_end) / (u + 1.0)).floor() as usize
        };
        // Points on the far boundary fold into the last cell.
        Some(a.min(self.cells_per_axis - 1))
    }

    /// The cell containing `coords`, under the half-open rule.
    pub fn locate(&self, coords: &[f64]) -> Option<usize> {
        let mut alpha = Vec::with_capacity(self.dim);
        for (axis, &x) in coords.iter().enumerate() {
            alpha.push(self.locate_axis(axis, x)?);
        }
        Some(self.linear_index(&alpha))
    }
}

/// Linear cell index of every point.
pub fn assign_cells<S: Scalar>(cloud: &PointCloud<S>, dec: &Decomposition) -> Result<Vec<usize>> {
    if cloud.dim() != dec.dim() {
        return Err(invalid(format!("cloud is {}-dimensional, decomposition {}-dimensional", cloud.dim(), dec.dim())));
    }
    let mut coords = vec![0.0; cloud.dim()];
    cloud
        .points()
        .enumerate()
        .map(|(vertex, p)| {
            for (c, &x) in coords.iter_mut().zip(p) {
                *c = x.as_f64();
            }
            dec.locate(&coords).ok_or_else(|| Error::PointOutsideRegion { vertex, coords: coords.clone() })
        })
        .collect()
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decomposition::{assign_cells, near_cube_decomposition};
use super::patch::{patch_cycles, PatchFailure, PatchStep};
use super::posa::{posa_hamilton, PosaFailure};
use super::snake::snake_order;
use super::two_opt::{local_search, DEFAULT_CANDIDATES};
use crate::error::{invalid, Error};
use crate::exact::{held_karp, HELD_KARP_LIMIT};
use crate::model::EmbeddedGraph;
use crate::rng::RngSeed;
use crate::scalar::Scalar;
use crate::tour::Tour;

/// Volume of the unit ball in `d` dimensions, `π^(d/2) / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    std::f64::consts::PI.powf(h) / statrs::function::gamma::gamma(h + 1.0)
}

/// `m = max(1, ⌊(n / (K·ν_d·ln n))^(1/d)⌋)`.
pub fn karp_cells_per_axis(n: usize, d: usize, density: f64) -> usize {
    if n < 3 || d == 0 {
        return 1;
    }
    let nf = n as f64;
    let x = nf / (density * unit_ball_volume(d) * nf.ln());
    (x.powf(1.0 / d as f64).floor() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KarpConfig {
    /// The density constant `K`: cells hold about `K·ν_d·ln n` points.
    pub density: f64,
    /// Cells up to this size are solved exactly.
    pub exact_limit: usize,
    /// Rotation budget per cell is `rotation_factor·k·ln k`.
    pub rotation_factor: f64,
    pub two_opt_passes: usize,
    pub candidates: usize,
}

impl Default for KarpConfig {
    fn default() -> Self {
        Self {
            density: 1.0,
            exact_limit: HELD_KARP_LIMIT,
            rotation_factor: 20.0,
            two_opt_passes: 500,
            candidates: DEFAULT_CANDIDATES,
        }
    }
}

impl KarpConfig {
    pub fn with_density(density: f64) -> Self {
        Self { density, ..Self::default() }
    }

    fn rotation_budget(&self, k: usize) -> usize {
        let kf = k as f64;
        ((self.rotation_factor * kf * kf.max(1.0).ln()).ceil() as usize).max(1)
    }

    fn validate(&self) -> crate::Result<()> {
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(invalid(format!("density constant must be positive, got {}", self.density)));
        }
        if self.exact_limit > HELD_KARP_LIMIT {
            return Err(invalid(format!("exact limit {} exceeds {HELD_KARP_LIMIT}", self.exact_limit)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KarpOutcome<S> {
    pub tour: Tour<S>,
    pub cells_per_axis: usize,
    pub nonempty_cells: usize,
    pub largest_cell: usize,
    pub exact_cells: usize,
    /// Sum of the cell tour lengths before patching.
    pub cell_length: S,
    pub patch_steps: Vec<PatchStep<S>>,
}

#[derive(Debug, thiserror::Error)]
pub enum KarpFailure {
    /// `exact` tells whether infeasibility was proved or the search gave up.
    #[error("cell {cell} with {size} vertices has no Hamilton cycle (exact: {exact})")]
    CellInfeasible { cell: usize, size: usize, exact: bool },
    #[error(transparent)]
    Patch(#[from] PatchFailure),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// Hamilton cycle of a whole graph: Held–Karp up to `exact_limit`
/// vertices, otherwise rotation–extension followed by [`local_search`].
pub fn solve_direct<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    config: &KarpConfig,
    seed: &RngSeed,
) -> Result<Tour<S>, KarpFailure> {
    let n = graph.len();
    let infeasible = |exact| KarpFailure::CellInfeasible { cell: 0, size: n, exact };
    if n <= config.exact_limit {
        return held_karp(graph)?.ok_or_else(|| infeasible(true));
    }
    let found = posa_hamilton(graph, config.rotation_budget(n), seed).map_err(|_: PosaFailure| infeasible(false))?;
    Ok(local_search(graph, found.tour, config.two_opt_passes, config.candidates).0)
}

/// Partition-and-patch tour.
///
/// Splits the cube into `m^d` cells, solves each nonempty cell on its
/// induced subgraph and patches the cell tours together along the snake
/// order. With `m = 1` this is [`solve_direct`] with the same seed; cell
/// `c` otherwise uses the stream `seed/cell#c`.
pub fn karp_partition_tour<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    config: &KarpConfig,
    seed: &RngSeed,
) -> Result<KarpOutcome<S>, KarpFailure> {
    config.validate()?;
    let n = graph.len();
    if n == 0 {
        return Err(invalid("cannot tour an empty graph").into());
    }
    let d = graph.dim();
    let m = karp_cells_per_axis(n, d, config.density);
    if m == 1 {
        let tour = solve_direct(graph, config, seed)?;
        let cell_length = tour.length();
        return Ok(KarpOutcome {
            tour,
            cells_per_axis: 1,
            nonempty_cells: 1,
            largest_cell: n,
            exact_cells: usize::from(n <= config.exact_limit),
            cell_length,
            patch_steps: Vec::new(),
        });
    }

    let dec = near_cube_decomposition(&vec![m as u64; d], m)?.with_unit(graph.cloud().scale().as_f64() / m as f64);
    let cell_of = assign_cells(graph.cloud(), &dec)?;
    let mut members = vec![Vec::new(); dec.cell_count()];
    for (v, &c) in cell_of.iter().enumerate() {
        members[c].push(v);
    }
    let sequence: Vec<usize> =
        snake_order(m, d).iter().map(|alpha| dec.linear_index(alpha)).filter(|&c| !members[c].is_empty()).collect();

    let cell_tours: Vec<(usize, Vec<usize>)> = sequence
        .par_iter()
        .map(|&c| {
            let verts = &members[c];
            let sub = graph.induced(verts);
            let tour = solve_direct(&sub, config, &seed.indexed("cell", c as u64)).map_err(|e| match e {
                KarpFailure::CellInfeasible { size, exact, .. } => KarpFailure::CellInfeasible { cell: c, size, exact },
                other => other,
            })?;
            Ok((c, tour.order().iter().map(|&i| verts[i]).collect()))
        })
        .collect::<Result<_, KarpFailure>>()?;

    let largest_cell = cell_tours.iter().map(|(_, t)| t.len()).max().unwrap_or(0);
    let exact_cells = cell_tours.iter().filter(|(_, t)| t.len() <= config.exact_limit).count();
    let cell_length = cell_tours.iter().map(|(_, t)| crate::tour::cycle_length(graph, t)).sum::<S>();
    let patched = patch_cycles(graph, &cell_tours)?;
    let tour = Tour::new(graph, patched.order)?;
    Ok(KarpOutcome {
        tour,
        cells_per_axis: m,
        nonempty_cells: cell_tours.len(),
        largest_cell,
        exact_cells,
        cell_length,
        patch_steps: patched.steps,
    })
}

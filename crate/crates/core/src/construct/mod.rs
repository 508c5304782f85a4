//! Tour construction: near-cube decompositions, cycle patching, the
//! partition-and-patch algorithm, the one-dimensional greedy tour,
//! permutation metrics, rotation–extension and the nearest-neighbor lower
//! bound.

mod decomposition;
mod karp;
mod line;
mod lower_bound;
mod patch;
mod permutation;
mod posa;
mod snake;
mod two_opt;

pub use decomposition::{assign_cells, near_cube_decomposition, AxisSplit, Decomposition};
pub use karp::{
    karp_cells_per_axis, karp_partition_tour, solve_direct, unit_ball_volume, KarpConfig, KarpFailure, KarpOutcome,
};
pub use line::{
    layered_bernoulli, line_greedy_tour, line_greedy_tour_layered, LayeredGraph, LineFailure, LineMode, LineStage,
    LineTour,
};
pub use lower_bound::{nn_lower_bound, NnBound};
pub use patch::{patch_cycles, PatchFailure, PatchOutcome, PatchStep, PATCH_SCAN_LIMIT};
pub use permutation::{permutation_metrics, PermutationMetrics};
pub use posa::{default_rotation_budget, posa_hamilton, PosaFailure, PosaOutcome, PosaStop};
pub use snake::{is_hamming_adjacent, snake_order};
pub use two_opt::{local_search, two_opt, TwoOptStats, DEFAULT_CANDIDATES, OR_OPT_SEGMENT};

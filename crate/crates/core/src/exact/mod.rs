//! Exact optimal tours for small instances.
//!
//! Both solvers return `Ok(None)` when the present edges admit no Hamilton
//! cycle; absent edges are never padded with a penalty.

mod brute;
mod held_karp;

pub use brute::{brute_force_tour, BRUTE_FORCE_LIMIT};
pub use held_karp::{held_karp, HELD_KARP_LIMIT};

use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;
use crate::tour::Tour;

/// Shared handling of `n ∈ {1, 2}`: one vertex is a zero-length tour, two
/// vertices need their edge and traverse it twice.
fn tiny_instance<S: Scalar>(graph: &EmbeddedGraph<S>) -> Option<Option<Tour<S>>> {
    match graph.len() {
        1 => Some(Some(Tour::new_unchecked(graph, vec![0]))),
        2 => Some(graph.has_edge(0, 1).then(|| Tour::new_unchecked(graph, vec![0, 1]))),
        _ => None,
    }
}

//! Shortest paths under Euclidean edge weights, hop distances, components
//! and the pair statistics built from them.

mod bfs;
mod dijkstra;
mod sampling;

pub use bfs::{
    bfs_hops, components, double_sweep_lower_bound, hop_diameter, min_hop_path, ComponentSummary, Diameter,
    EXACT_DIAMETER_LIMIT,
};
pub use dijkstra::{shortest_path, single_source, Dijkstra, GeodesicResult};
pub use sampling::{
    excess_sample, measure_pairs, sample_pairs, stretch_sample, write_pair_csv, PairSample, StretchSummary,
    MAX_PAIR_ATTEMPTS,
};

use serde::Serialize;

/// Either a value or an explicit "no path".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reach<T> {
    Reachable(T),
    Unreachable,
}

impl<T> Reach<T> {
    pub fn is_reachable(&self) -> bool {
        matches!(self, Reach::Reachable(_))
    }

    pub fn value(self) -> Option<T> {
        match self {
            Reach::Reachable(v) => Some(v),
            Reach::Unreachable => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Reach<U> {
        match self {
            Reach::Reachable(v) => Reach::Reachable(f(v)),
            Reach::Unreachable => Reach::Unreachable,
        }
    }
}

impl<T> From<Option<T>> for Reach<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Reach::Unreachable, Reach::Reachable)
    }
}

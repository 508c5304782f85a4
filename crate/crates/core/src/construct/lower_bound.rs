use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;

/// Sum over vertices of the distance to the nearest graph neighbor.
///
/// Each vertex's two tour edges are at least that long and each tour edge
/// is shared by two vertices, so the sum bounds every Hamilton tour from
/// below. Isolated vertices make it infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NnBound<S> {
    pub value: S,
    pub isolated: usize,
}

pub fn nn_lower_bound<S: Scalar>(graph: &EmbeddedGraph<S>) -> NnBound<S> {
    if graph.len() <= 1 {
        return NnBound { value: S::zero(), isolated: 0 };
    }
    let mut value = S::zero();
    let mut isolated = 0;
    for u in 0..graph.len() {
        let nearest = graph.neighbors(u).map(|v| graph.dist(u, v)).fold(S::infinity(), S::min);
        if nearest.is_infinite() {
            isolated += 1;
        }
        value = value + nearest;
    }
    NnBound { value, isolated }
}

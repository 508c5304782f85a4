use rand::seq::IndexedRandom;
use rand::Rng;

use crate::geodesics::components;
use crate::model::EmbeddedGraph;
use crate::rng::RngSeed;
use crate::scalar::{cmp, Scalar};
use crate::tour::Tour;

/// `⌈20·n·ln n⌉`, at least 1.
pub fn default_rotation_budget(n: usize) -> usize {
    let n = n as f64;
    ((20.0 * n * n.max(1.0).ln()).ceil() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosaOutcome<S> {
    pub tour: Tour<S>,
    pub extensions: usize,
    pub rotations: usize,
    /// Most distinct endpoints reached by rotations between two extensions.
    pub max_endpoint_set: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosaStop {
    Empty,
    Disconnected,
    /// A vertex of degree below two rules out a Hamilton cycle.
    LowDegree(usize),
    BudgetExhausted,
}

/// No Hamilton cycle found; `path` is the path held when the search stopped.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("rotation-extension failed ({reason:?}) with a path of {} vertices after {rotations} rotations", path.len())]
pub struct PosaFailure {
    pub reason: PosaStop,
    pub path: Vec<usize>,
    pub rotations: usize,
}

/// Rotation-extension search for a Hamilton cycle.
///
/// Grows a path from a random start by extending its end to its nearest
/// unvisited neighbor. When stuck, picks a random neighbor `y` of the end
/// on the path and reverses the segment after `y`, which keeps the first
/// vertex fixed and produces a new end. A spanning path whose end is
/// adjacent to its start closes the cycle.
pub fn posa_hamilton<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    max_rotations: usize,
    seed: &RngSeed,
) -> Result<PosaOutcome<S>, PosaFailure> {
    let n = graph.len();
    let fail = |reason, path: Vec<usize>, rotations| Err(PosaFailure { reason, path, rotations });
    match n {
        0 => return fail(PosaStop::Empty, Vec::new(), 0),
        1 => {
            return Ok(PosaOutcome {
                tour: Tour::new_unchecked(graph, vec![0]),
                extensions: 0,
                rotations: 0,
                max_endpoint_set: 1,
            })
        }
        2 => {
            return if graph.has_edge(0, 1) {
                Ok(PosaOutcome {
                    tour: Tour::new_unchecked(graph, vec![0, 1]),
                    extensions: 1,
                    rotations: 0,
                    max_endpoint_set: 1,
                })
            } else {
                fail(PosaStop::Disconnected, vec![0], 0)
            }
        }
        _ => {}
    }
    if let Some(v) = (0..n).find(|&v| graph.degree(v) < 2) {
        return fail(PosaStop::LowDegree(v), vec![v], 0);
    }
    if !components(graph).is_connected() {
        return fail(PosaStop::Disconnected, Vec::new(), 0);
    }

    const OFF: usize = usize::MAX;
    let mut rng = seed.rng();
    let start = rng.random_range(0..n);
    let mut path = Vec::with_capacity(n);
    let mut pos = vec![OFF; n];
    path.push(start);
    pos[start] = 0;

    let (mut extensions, mut rotations) = (0usize, 0usize);
    let mut stamp = vec![0u32; n];
    let mut epoch = 1u32;
    let mut endpoint_set = 1usize;
    let mut max_endpoint_set = 1usize;
    let mut scratch: Vec<usize> = Vec::new();

    loop {
        let len = path.len();
        let end = path[len - 1];
        if len == n && graph.has_edge(end, path[0]) {
            break;
        }
        if len < n {
            let nearest = graph
                .neighbors(end)
                .filter(|&w| pos[w] == OFF)
                .min_by(|&a, &b| cmp(graph.dist(end, a), graph.dist(end, b)));
            if let Some(w) = nearest {
                pos[w] = len;
                path.push(w);
                extensions += 1;
                epoch += 1;
                endpoint_set = 1;
                continue;
            }
            if graph.neighbors(path[0]).any(|w| pos[w] == OFF) {
                path.reverse();
                for (i, &v) in path.iter().enumerate() {
                    pos[v] = i;
                }
                continue;
            }
            if graph.has_edge(end, path[0]) {
                // The path closes into a cycle; reopen it next to a vertex
                // with an outside neighbor, which exists by connectivity.
                let i = (0..len)
                    .find(|&i| graph.neighbors(path[i]).any(|w| pos[w] == OFF))
                    .expect("connected graph has an outside neighbor");
                path.rotate_left(i + 1);
                for (j, &v) in path.iter().enumerate() {
                    pos[v] = j;
                }
                rotations += 1;
                if rotations > max_rotations {
                    return fail(PosaStop::BudgetExhausted, path, rotations);
                }
                continue;
            }
        }
        if rotations >= max_rotations {
            return fail(PosaStop::BudgetExhausted, path, rotations);
        }
        scratch.clear();
        scratch.extend(graph.neighbors(end).filter(|&w| pos[w] != OFF && pos[w] + 2 < len));
        let &y = scratch.choose(&mut rng).expect("degree at least two");
        let i = pos[y];
        path[i + 1..].reverse();
        for (j, &v) in path.iter().enumerate().skip(i + 1) {
            pos[v] = j;
        }
        rotations += 1;
        let new_end = path[len - 1];
        if stamp[new_end] != epoch {
            stamp[new_end] = epoch;
            endpoint_set += 1;
            max_endpoint_set = max_endpoint_set.max(endpoint_set);
        }
    }
    Ok(PosaOutcome { tour: Tour::new_unchecked(graph, path), extensions, rotations, max_endpoint_set })
}

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geodesics::Reach;
use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;

/// Components up to this size get an exact all-pairs hop diameter.
pub const EXACT_DIAMETER_LIMIT: usize = 2000;

const UNSEEN: u32 = u32::MAX;

/// Hop distances from `source`; `u32::MAX` marks unreachable vertices.
pub fn bfs_hops<S: Scalar>(graph: &EmbeddedGraph<S>, source: usize) -> Vec<u32> {
    let mut hops = vec![UNSEEN; graph.len()];
    let mut queue = VecDeque::new();
    hops[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = hops[u] + 1;
        for v in graph.neighbors(u) {
            if hops[v] == UNSEEN {
                hops[v] = next;
                queue.push_back(v);
            }
        }
    }
    hops
}

/// Fewest edges on a `u`–`v` path.
pub fn min_hop_path<S: Scalar>(graph: &EmbeddedGraph<S>, u: usize, v: usize) -> Result<Reach<usize>> {
    graph.check_vertex(u)?;
    graph.check_vertex(v)?;
    let hops = bfs_hops(graph, u)[v];
    Ok(if hops == UNSEEN { Reach::Unreachable } else { Reach::Reachable(hops as usize) })
}

/// Connected components, numbered in order of their lowest vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub component_of: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Largest component, lowest id on ties; `None` for the empty graph.
    pub giant: Option<usize>,
}

impl ComponentSummary {
    pub fn members(&self, component: usize) -> Vec<usize> {
        (0..self.component_of.len()).filter(|&v| self.component_of[v] == component).collect()
    }

    pub fn giant_size(&self) -> usize {
        self.giant.map_or(0, |g| self.sizes[g])
    }

    pub fn is_connected(&self) -> bool {
        self.sizes.len() <= 1
    }
}

pub fn components<S: Scalar>(graph: &EmbeddedGraph<S>) -> ComponentSummary {
    let n = graph.len();
    let mut component_of = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        component_of[start] = id;
        stack.push(start);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for v in graph.neighbors(u) {
                if component_of[v] == usize::MAX {
                    component_of[v] = id;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    let giant = (0..sizes.len()).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)));
    ComponentSummary { component_of, sizes, giant }
}

/// Hop diameter of a component; a lower bound when `approximate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Diameter {
    pub value: usize,
    pub approximate: bool,
}

fn eccentricity<S: Scalar>(graph: &EmbeddedGraph<S>, source: usize) -> (usize, usize) {
    let hops = bfs_hops(graph, source);
    let (far, &h) = hops
        .iter()
        .enumerate()
        .filter(|(_, &h)| h != UNSEEN)
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("source reaches itself");
    (h as usize, far)
}

/// Double-sweep lower bound: BFS from `start`, then from the farthest
/// vertex found.
pub fn double_sweep_lower_bound<S: Scalar>(graph: &EmbeddedGraph<S>, start: usize) -> usize {
    let (_, far) = eccentricity(graph, start);
    eccentricity(graph, far).0
}

/// Hop diameter of the component whose vertices are `members`.
///
/// Exact (all-pairs BFS) up to [`EXACT_DIAMETER_LIMIT`] vertices, otherwise
/// the double-sweep bound flagged as approximate.
pub fn hop_diameter<S: Scalar>(graph: &EmbeddedGraph<S>, members: &[usize]) -> Result<Diameter> {
    let &first = members.first().ok_or_else(|| invalid("component must be nonempty"))?;
    for &v in members {
        graph.check_vertex(v)?;
    }
    if members.len() > EXACT_DIAMETER_LIMIT {
        return Ok(Diameter { value: double_sweep_lower_bound(graph, first), approximate: true });
    }
    let value = members.iter().map(|&v| eccentricity(graph, v).0).max().unwrap_or(0);
    Ok(Diameter { value, approximate: false })
}

use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;
use crate::tour::cycle_length;

/// Vertex pairs examined per merge before settling for the best found so far.
pub const PATCH_SCAN_LIMIT: usize = 2000;

/// One merge: cycle edge `removed[0]` and tour edge `removed[1]` replaced
/// by the two edges in `added`, changing the length by `delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchStep<S> {
    pub prev_cell: usize,
    pub next_cell: usize,
    pub removed: [(usize, usize); 2],
    pub added: [(usize, usize); 2],
    pub delta: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchOutcome<S> {
    pub order: Vec<usize>,
    pub length: S,
    pub steps: Vec<PatchStep<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no edge pair joins cell {prev_cell} to cell {next_cell}")]
pub struct PatchFailure {
    pub prev_cell: usize,
    pub next_cell: usize,
}

/// Cyclic edges of an order: `(x, succ x)`, one self pair for a single
/// vertex and one pair for two.
fn tour_edges(order: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let k = order.len();
    let pairs = if k <= 2 { 1 } else { k };
    (0..pairs).map(move |i| (order[i], order[(i + 1) % k]))
}

/// Merges cell tours, in the given order, into one cycle.
///
/// Each next tour `T` is spliced into the running cycle by deleting a cycle
/// edge `(u,v)` and a tour edge `(x,y)` and inserting either `(u,x),(v,y)`
/// or `(u,y),(v,x)`, whichever adds less length. Cycle edges are taken
/// from the previous cell's own tour when any survive, otherwise from the
/// whole cycle. Both inserted edges must be present in `graph`.
pub fn patch_cycles<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    cells: &[(usize, Vec<usize>)],
) -> Result<PatchOutcome<S>, PatchFailure> {
    let mut steps = Vec::with_capacity(cells.len().saturating_sub(1));
    let Some((first_cell, first)) = cells.first() else {
        return Ok(PatchOutcome { order: Vec::new(), length: S::zero(), steps });
    };
    let n = graph.len();
    let mut succ = vec![usize::MAX; n];
    let k = first.len();
    for i in 0..k {
        succ[first[i]] = first[(i + 1) % k];
    }
    let mut length = cycle_length(graph, first);
    let mut prev = (*first_cell, first);

    for (next_cell, tour) in &cells[1..] {
        let in_cycle = |succ: &[usize], a: usize, b: usize| -> Option<(usize, usize)> {
            if succ[a] == b {
                Some((a, b))
            } else if succ[b] == a {
                Some((b, a))
            } else {
                None
            }
        };
        let preferred: Vec<(usize, usize)> = tour_edges(prev.1).filter_map(|(a, b)| in_cycle(&succ, a, b)).collect();
        let mut choice = best_splice(graph, &preferred, tour);
        if choice.is_none() {
            let start = first[0];
            let mut all = Vec::new();
            let mut u = start;
            loop {
                all.push((u, succ[u]));
                u = succ[u];
                if u == start {
                    break;
                }
            }
            if all.len() == 2 {
                all.truncate(1);
            }
            choice = best_splice(graph, &all, tour);
        }
        let Some(s) = choice else {
            return Err(PatchFailure { prev_cell: prev.0, next_cell: *next_cell });
        };

        let m = tour.len();
        let (u, v) = s.cycle_edge;
        let (i, j) = (s.tour_index, (s.tour_index + 1) % m);
        let (x, y) = (tour[i], tour[j]);
        // Walk T from `a` to `b` in the direction that covers every vertex.
        let (a, b, step) = if s.flipped { (y, x, 1) } else { (x, y, m - 1) };
        let mut cur = if s.flipped { j } else { i };
        succ[u] = a;
        for _ in 1..m {
            let nxt = (cur + step) % m;
            succ[tour[cur]] = tour[nxt];
            cur = nxt;
        }
        succ[b] = v;

        length = length + cycle_length(graph, tour) + s.delta;
        steps.push(PatchStep {
            prev_cell: prev.0,
            next_cell: *next_cell,
            removed: [(u, v), (x, y)],
            added: [(u, a), (v, b)],
            delta: s.delta,
        });
        prev = (*next_cell, tour);
    }

    let start = first[0];
    let mut order = Vec::with_capacity(n);
    let mut u = start;
    loop {
        order.push(u);
        u = succ[u];
        if u == start {
            break;
        }
    }
    Ok(PatchOutcome { order, length, steps })
}

struct Splice<S> {
    cycle_edge: (usize, usize),
    tour_index: usize,
    flipped: bool,
    delta: S,
}

fn best_splice<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    cycle_edges: &[(usize, usize)],
    tour: &[usize],
) -> Option<Splice<S>> {
    let m = tour.len();
    let mut best: Option<Splice<S>> = None;
    let mut scanned = 0usize;
    for &(u, v) in cycle_edges {
        let uv = graph.dist(u, v);
        for (i, (x, y)) in tour_edges(tour).enumerate() {
            if scanned >= PATCH_SCAN_LIMIT && best.is_some() {
                return best;
            }
            scanned += 1;
            let base = uv + if m >= 2 { graph.dist(x, y) } else { S::zero() };
            for flipped in [false, true] {
                let (a, b) = if flipped { (y, x) } else { (x, y) };
                if !graph.has_edge(u, a) || !graph.has_edge(v, b) {
                    continue;
                }
                let delta = graph.dist(u, a) + graph.dist(v, b) - base;
                if best.as_ref().is_none_or(|s| delta < s.delta) {
                    best = Some(Splice { cycle_edge: (u, v), tour_index: i, flipped, delta });
                }
            }
        }
    }
    best
}

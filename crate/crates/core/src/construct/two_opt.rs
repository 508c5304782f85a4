use crate::model::EmbeddedGraph;
use crate::scalar::{cmp, Scalar};
use crate::tour::Tour;

/// Nearest graph neighbors examined per vertex.
pub const DEFAULT_CANDIDATES: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TwoOptStats {
    pub passes: usize,
    pub moves: usize,
}

/// Longest segment moved by an Or-opt step.
pub const OR_OPT_SEGMENT: usize = 3;

/// First-improvement 2-opt that only introduces present edges.
///
/// A move drops tour edges `(a,b)` and `(c,d)` and adds `(a,c)`, `(b,d)`;
/// `c` ranges over the `candidates` nearest graph neighbors of `a`.
/// Stops after a pass without improvement or `max_passes` passes.
pub fn two_opt<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    tour: Tour<S>,
    max_passes: usize,
    candidates: usize,
) -> (Tour<S>, TwoOptStats) {
    improve(graph, tour, max_passes, candidates, false)
}

/// [`two_opt`] with an Or-opt sweep after each 2-opt sweep: segments of
/// up to [`OR_OPT_SEGMENT`] vertices are cut out and reinserted, either
/// way round, next to a candidate neighbor. Every added edge is present.
pub fn local_search<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    tour: Tour<S>,
    max_passes: usize,
    candidates: usize,
) -> (Tour<S>, TwoOptStats) {
    improve(graph, tour, max_passes, candidates, true)
}

fn improve<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    tour: Tour<S>,
    max_passes: usize,
    candidates: usize,
    or_opt: bool,
) -> (Tour<S>, TwoOptStats) {
    let n = tour.len();
    let mut stats = TwoOptStats::default();
    if n < 5 || max_passes == 0 {
        return (tour, stats);
    }
    let near: Vec<Vec<u32>> = (0..n)
        .map(|u| {
            let mut nb: Vec<(S, u32)> = graph.neighbors(u).map(|v| (graph.dist(u, v), v as u32)).collect();
            let keep = candidates.min(nb.len());
            if keep > 0 && keep < nb.len() {
                nb.select_nth_unstable_by(keep - 1, |a, b| cmp(a.0, b.0));
                nb.truncate(keep);
            }
            nb.sort_by(|a, b| cmp(a.0, b.0).then(a.1.cmp(&b.1)));
            nb.into_iter().map(|(_, v)| v).collect()
        })
        .collect();

    let mut ring = Ring::new(tour.into_order());
    while stats.passes < max_passes {
        stats.passes += 1;
        let mut moves = two_opt_sweep(graph, &near, &mut ring);
        if or_opt {
            moves += or_opt_sweep(graph, &near, &mut ring);
        }
        stats.moves += moves;
        if moves == 0 {
            break;
        }
    }
    (Tour::new_unchecked(graph, ring.order), stats)
}

fn two_opt_sweep<S: Scalar>(graph: &EmbeddedGraph<S>, near: &[Vec<u32>], ring: &mut Ring) -> usize {
    let eps = S::tolerance();
    let mut moves = 0;
    for (a, near_a) in near.iter().enumerate() {
        for forward in [true, false] {
            let b = ring.step(a, forward);
            let ab = graph.dist(a, b);
            for &c in near_a {
                let c = c as usize;
                let ac = graph.dist(a, c);
                if ac >= ab {
                    break;
                }
                let d = ring.step(c, forward);
                if c == b || d == a {
                    continue;
                }
                let gain = ab + graph.dist(c, d) - ac - graph.dist(b, d);
                if gain > eps && graph.has_edge(b, d) {
                    if forward {
                        ring.reverse(b, c);
                    } else {
                        ring.reverse(a, d);
                    }
                    moves += 1;
                    break;
                }
            }
        }
    }
    moves
}

/// One pass of segment moves. For each segment `s1..s2` (forward) with
/// neighbors `p`, `q`, tries every slot `(x, y)`, `y` after `x`, that
/// touches a candidate neighbor of `s1` or `s2`.
fn or_opt_sweep<S: Scalar>(graph: &EmbeddedGraph<S>, near: &[Vec<u32>], ring: &mut Ring) -> usize {
    let n = ring.order.len();
    let eps = S::tolerance();
    let mut moves = 0;
    for len in 1..=OR_OPT_SEGMENT.min(n.saturating_sub(3)) {
        for s1 in 0..n {
            let mut s2 = s1;
            for _ in 1..len {
                s2 = ring.step(s2, true);
            }
            let (p, q) = (ring.step(s1, false), ring.step(s2, true));
            if !graph.has_edge(p, q) {
                continue;
            }
            let removed = graph.dist(p, s1) + graph.dist(s2, q) - graph.dist(p, q);
            if !(removed > eps) {
                continue;
            }
            let inside = |v: usize| (ring.pos[v] + n - ring.pos[s1]) % n < len;
            let mut best: Option<(S, usize, usize, bool)> = None;
            for &v in near[s1].iter().chain(&near[s2]) {
                let v = v as usize;
                if inside(v) {
                    continue;
                }
                for (x, y) in [(v, ring.step(v, true)), (ring.step(v, false), v)] {
                    if inside(x) || inside(y) {
                        continue;
                    }
                    let xy = graph.dist(x, y);
                    // `reversed` places s2 next to x.
                    for reversed in [false, true] {
                        let (a, b) = if reversed { (s2, s1) } else { (s1, s2) };
                        if !graph.has_edge(x, a) || !graph.has_edge(b, y) {
                            continue;
                        }
                        let gain = removed + xy - graph.dist(x, a) - graph.dist(b, y);
                        if gain > eps && best.is_none_or(|(g, ..)| gain > g) {
                            best = Some((gain, x, y, reversed));
                        }
                    }
                }
            }
            if let Some((_, x, y, reversed)) = best {
                // p S q .. x y  ->  p x .. q s2..s1 y  ->  p q .. x s2..s1 y
                ring.swap(p, s1, x, y);
                ring.swap(p, x, q, s2);
                if !reversed {
                    ring.swap(x, s2, s1, y);
                }
                moves += 1;
            }
        }
    }
    moves
}

/// Cyclic order with a position index.
struct Ring {
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl Ring {
    fn new(order: Vec<usize>) -> Self {
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        Self { order, pos }
    }

    #[inline]
    fn step(&self, v: usize, forward: bool) -> usize {
        let n = self.order.len();
        let i = self.pos[v];
        self.order[if forward { (i + 1) % n } else { (i + n - 1) % n }]
    }

    /// Replaces tour edges `(a,b)`, `(c,d)` by `(a,c)`, `(b,d)`, where
    /// `b` follows `a` and `d` follows `c` in one direction of travel.
    fn swap(&mut self, a: usize, b: usize, c: usize, d: usize) {
        debug_assert!(
            (self.step(a, true) == b && self.step(c, true) == d)
                || (self.step(a, false) == b && self.step(c, false) == d)
        );
        if self.step(a, true) == b {
            self.reverse(b, c);
        } else {
            self.reverse(c, b);
        }
    }

    /// Reverses the forward segment `from..=to`, or its complement when
    /// that is shorter; both give the same cycle.
    fn reverse(&mut self, from: usize, to: usize) {
        let n = self.order.len();
        let (mut i, mut j) = (self.pos[from], self.pos[to]);
        let mut len = (j + n - i) % n + 1;
        if 2 * len > n {
            (i, j) = ((j + 1) % n, (i + n - 1) % n);
            len = n - len;
        }
        for _ in 0..len / 2 {
            self.order.swap(i, j);
            self.pos[self.order[i]] = i;
            self.pos[self.order[j]] = j;
            i = (i + 1) % n;
            j = (j + n - 1) % n;
        }
    }
}

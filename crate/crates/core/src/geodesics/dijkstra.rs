use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::geodesics::Reach;
use crate::model::EmbeddedGraph;
use crate::scalar::{cmp, Scalar};

/// Result of a single source–target query.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicResult<S> {
    pub source: usize,
    pub target: usize,
    /// Source to target inclusive; empty when unreachable.
    pub path: Vec<usize>,
    pub graph_distance: Reach<S>,
    pub euclidean_distance: S,
    pub hops: Reach<usize>,
}

impl<S: Scalar> GeodesicResult<S> {
    /// `d_X − d_E`, infinite when unreachable.
    pub fn excess(&self) -> S {
        self.graph_distance.value().map_or(S::infinity(), |d| d - self.euclidean_distance)
    }
}

#[derive(Clone, Copy)]
struct Entry<S> {
    dist: S,
    vertex: u32,
}

impl<S: Scalar> PartialEq for Entry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Entry<S> {}

impl<S: Scalar> PartialOrd for Entry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Entry<S> {
    // Reversed for a min-heap; equal distances pop the lower index first.
    fn cmp(&self, other: &Self) -> Ordering {
        cmp(other.dist, self.dist).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

const NONE: u32 = u32::MAX;

/// Reusable Dijkstra scratch space for one graph size.
pub struct Dijkstra<S> {
    dist: Vec<S>,
    pred: Vec<u32>,
    settled: Vec<bool>,
    touched: Vec<u32>,
    heap: BinaryHeap<Entry<S>>,
}

impl<S: Scalar> Dijkstra<S> {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![S::infinity(); n],
            pred: vec![NONE; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            *self = Self::new(n);
            return;
        }
        for &v in &self.touched {
            let v = v as usize;
            self.dist[v] = S::infinity();
            self.pred[v] = NONE;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs from `source`, stopping once `target` is settled (or never,
    /// when `target` is `None`).
    fn run(&mut self, graph: &EmbeddedGraph<S>, source: usize, target: Option<usize>) {
        self.reset(graph.len());
        self.dist[source] = S::zero();
        self.touched.push(source as u32);
        self.heap.push(Entry { dist: S::zero(), vertex: source as u32 });
        while let Some(Entry { dist, vertex }) = self.heap.pop() {
            let u = vertex as usize;
            if self.settled[u] || dist > self.dist[u] {
                continue;
            }
            self.settled[u] = true;
            if Some(u) == target {
                return;
            }
            for v in graph.neighbors(u) {
                if self.settled[v] {
                    continue;
                }
                let candidate = dist + graph.dist(u, v);
                let current = self.dist[v];
                if candidate < current || (candidate == current && (vertex) < self.pred[v]) {
                    if current == S::infinity() {
                        self.touched.push(v as u32);
                    }
                    self.dist[v] = candidate;
                    self.pred[v] = vertex;
                    if candidate < current {
                        self.heap.push(Entry { dist: candidate, vertex: v as u32 });
                    }
                }
            }
        }
    }

    pub fn query(&mut self, graph: &EmbeddedGraph<S>, source: usize, target: usize) -> Result<GeodesicResult<S>> {
        graph.check_vertex(source)?;
        graph.check_vertex(target)?;
        // Always search from the lower index so both orientations of a pair
        // perform the identical computation.
        let (from, to) = (source.min(target), source.max(target));
        self.run(graph, from, Some(to));
        let euclidean_distance = graph.dist(source, target);
        if !self.settled[to] {
            return Ok(GeodesicResult {
                source,
                target,
                path: Vec::new(),
                graph_distance: Reach::Unreachable,
                euclidean_distance,
                hops: Reach::Unreachable,
            });
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = self.pred[v] as usize;
            path.push(v);
        }
        if from == source {
            path.reverse();
        }
        Ok(GeodesicResult {
            source,
            target,
            hops: Reach::Reachable(path.len() - 1),
            path,
            graph_distance: Reach::Reachable(self.dist[to]),
            euclidean_distance,
        })
    }
}

/// Exact minimum-length path between `u` and `v` over present edges.
pub fn shortest_path<S: Scalar>(graph: &EmbeddedGraph<S>, u: usize, v: usize) -> Result<GeodesicResult<S>> {
    Dijkstra::new(graph.len()).query(graph, u, v)
}

/// Distances from `source` to every vertex.
pub fn single_source<S: Scalar>(graph: &EmbeddedGraph<S>, source: usize) -> Result<Vec<Reach<S>>> {
    graph.check_vertex(source)?;
    let mut d = Dijkstra::new(graph.len());
    d.run(graph, source, None);
    Ok(d.dist.iter().map(|&x| if x.is_finite() { Reach::Reachable(x) } else { Reach::Unreachable }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{attach_bernoulli_edges, generate_uniform_cloud, Adjacency, PointCloud};
    use crate::rng::RngSeed;

    fn random_graph(n: usize, p: f64, seed: u64) -> EmbeddedGraph<f64> {
        let c: PointCloud<f64> = generate_uniform_cloud(n, 2, &RngSeed::new(seed, "points")).unwrap();
        attach_bernoulli_edges(c, p, &RngSeed::new(seed, "edges")).unwrap()
    }

    /// Independent oracle: Bellman–Ford over the edge list.
    fn bellman_ford(g: &EmbeddedGraph<f64>, s: usize) -> Vec<f64> {
        let mut d = vec![f64::INFINITY; g.len()];
        d[s] = 0.0;
        let edges: Vec<_> = g.edges().collect();
        for _ in 0..g.len() {
            let mut changed = false;
            for &(u, v) in &edges {
                let w = g.dist(u, v);
                if d[u] + w < d[v] {
                    d[v] = d[u] + w;
                    changed = true;
                }
                if d[v] + w < d[u] {
                    d[u] = d[v] + w;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        d
    }

    fn check_path(g: &EmbeddedGraph<f64>, r: &GeodesicResult<f64>) {
        let Reach::Reachable(dx) = r.graph_distance else { return };
        assert_eq!(r.path.first(), Some(&r.source));
        assert_eq!(r.path.last(), Some(&r.target));
        let along: f64 = r
            .path
            .windows(2)
            .map(|w| {
                assert!(g.has_edge(w[0], w[1]));
                g.dist(w[0], w[1])
            })
            .sum();
        assert!((along - dx).abs() <= 1e-9);
        assert!(dx >= r.euclidean_distance - 1e-9);
    }

    #[test]
    fn complete_graph_is_direct() {
        let g = random_graph(25, 1.0, 1);
        for u in 0..25 {
            for v in 0..25 {
                let r = shortest_path(&g, u, v).unwrap();
                let dx = r.graph_distance.value().unwrap();
                assert!((dx - r.euclidean_distance).abs() < 1e-12);
                assert_eq!(r.hops, Reach::Reachable(usize::from(u != v)));
            }
        }
    }

    #[test]
    fn forced_detour() {
        let c = PointCloud::from_points(1, 2.0, &[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let g = EmbeddedGraph::from_edges(c, [(0, 1), (1, 2)], 1.0, 0).unwrap();
        let r = shortest_path(&g, 0, 2).unwrap();
        assert_eq!(r.graph_distance, Reach::Reachable(2.0));
        assert_eq!(r.path, vec![0, 1, 2]);
        assert_eq!(r.hops, Reach::Reachable(2));
    }

    #[test]
    fn matches_bellman_ford() {
        for seed in 0..4 {
            let g = random_graph(50, 0.08, seed);
            for s in [0, 17, 49] {
                let oracle = bellman_ford(&g, s);
                let all = single_source(&g, s).unwrap();
                for t in 0..50 {
                    let r = shortest_path(&g, s, t).unwrap();
                    check_path(&g, &r);
                    match r.graph_distance {
                        Reach::Reachable(d) => {
                            assert!((d - oracle[t]).abs() < 1e-9, "{d} vs {}", oracle[t]);
                            let single = all[t].value().unwrap();
                            assert!((single - d).abs() < 1e-12);
                        }
                        Reach::Unreachable => {
                            assert!(oracle[t].is_infinite());
                            assert_eq!(all[t], Reach::Unreachable);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unreachable_is_explicit() {
        let c = PointCloud::<f64>::from_points(1, 1.0, &[vec![0.0], vec![1.0]]).unwrap();
        let g = EmbeddedGraph::new(c, Adjacency::empty(2), 0.5, None, 0).unwrap();
        let r = shortest_path(&g, 0, 1).unwrap();
        assert_eq!(r.graph_distance, Reach::Unreachable);
        assert_eq!(r.hops, Reach::Unreachable);
        assert!(r.path.is_empty());
        assert!(r.excess().is_infinite());
        assert!(shortest_path(&g, 0, 5).is_err());
    }

    #[test]
    fn symmetric_metric_and_monotone() {
        let g = random_graph(60, 0.1, 9);
        let sup = random_graph(60, 1.0, 9);
        let sub_edges = g.edges();
        let denser =
            EmbeddedGraph::from_edges(g.shared_cloud(), sub_edges.chain(sup.edges().step_by(7)), 0.1, 9).unwrap();
        let dist: Vec<Vec<Reach<f64>>> = (0..60).map(|s| single_source(&g, s).unwrap()).collect();
        let dense_dist: Vec<Vec<Reach<f64>>> = (0..60).map(|s| single_source(&denser, s).unwrap()).collect();
        for u in 0..60 {
            for v in 0..60 {
                let a = shortest_path(&g, u, v).unwrap().graph_distance;
                let b = shortest_path(&g, v, u).unwrap().graph_distance;
                assert_eq!(a, b);
                if let (Reach::Reachable(x), Reach::Reachable(y)) = (dist[u][v], dense_dist[u][v]) {
                    assert!(y <= x + 1e-12);
                }
                for w in (0..60).step_by(5) {
                    if let (Reach::Reachable(uv), Reach::Reachable(vw), Reach::Reachable(uw)) =
                        (dist[u][v], dist[v][w], dist[u][w])
                    {
                        assert!(uw <= uv + vw + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn single_precision() {
        let c: PointCloud<f32> = generate_uniform_cloud(30, 2, &RngSeed::new(3, "points")).unwrap();
        let g = attach_bernoulli_edges(c, 1.0, &RngSeed::new(3, "edges")).unwrap();
        let r = shortest_path(&g, 0, 1).unwrap();
        assert!((r.graph_distance.value().unwrap() - r.euclidean_distance).abs() < 1e-6);
    }
}

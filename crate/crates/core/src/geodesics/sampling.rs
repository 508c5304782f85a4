use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geodesics::{Dijkstra, Reach};
use crate::model::EmbeddedGraph;
use crate::rng::RngSeed;
use crate::scalar::Scalar;

/// Rejection cap when drawing a pair that satisfies the separation.
pub const MAX_PAIR_ATTEMPTS: usize = 1_000_000;

/// One sampled vertex pair with both distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairSample<S> {
    pub source: usize,
    pub target: usize,
    pub euclidean: S,
    pub graph: Reach<S>,
    pub hops: Reach<usize>,
}

impl<S: Scalar> PairSample<S> {
    /// `d_X − d_E`, infinite when unreachable.
    pub fn excess(&self) -> S {
        self.graph.value().map_or(S::infinity(), |d| d - self.euclidean)
    }

    /// `d_X / d_E`, infinite when unreachable.
    pub fn ratio(&self) -> S {
        self.graph.value().map_or(S::infinity(), |d| d / self.euclidean)
    }

    pub fn is_reachable(&self) -> bool {
        self.graph.is_reachable()
    }
}

/// Uniform distinct pairs with `d_E >= min_separation` (and `d_E > 0` when
/// `strictly_apart`), each found within [`MAX_PAIR_ATTEMPTS`] draws.
pub fn sample_pairs<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    count: usize,
    min_separation: S,
    strictly_apart: bool,
    seed: &RngSeed,
) -> Result<Vec<(usize, usize)>> {
    let n = graph.len();
    if n < 2 {
        return Err(invalid(format!("need at least two vertices to sample pairs, have {n}")));
    }
    let mut rng = seed.rng();
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..MAX_PAIR_ATTEMPTS {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n - 1);
            let v = if v >= u { v + 1 } else { v };
            let d = graph.dist(u, v);
            if d >= min_separation && !(strictly_apart && d == S::zero()) {
                found = Some((u, v));
                break;
            }
        }
        pairs.push(found.ok_or(Error::SeparationUnattainable {
            min_separation: min_separation.as_f64(),
            attempts: MAX_PAIR_ATTEMPTS,
        })?);
    }
    Ok(pairs)
}

/// Shortest paths for many pairs, fanned out over the rayon pool. Output
/// order follows `pairs`.
pub fn measure_pairs<S: Scalar>(graph: &EmbeddedGraph<S>, pairs: &[(usize, usize)]) -> Result<Vec<PairSample<S>>> {
    pairs
        .par_iter()
        .map_init(
            || Dijkstra::new(graph.len()),
            |dijkstra, &(u, v)| {
                let r = dijkstra.query(graph, u, v)?;
                Ok(PairSample {
                    source: u,
                    target: v,
                    euclidean: r.euclidean_distance,
                    graph: r.graph_distance,
                    hops: r.hops,
                })
            },
        )
        .collect()
}

/// Additive excess `d_X − d_E` over random pairs at least `min_separation`
/// apart.
pub fn excess_sample<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    pair_count: usize,
    min_separation: S,
    seed: &RngSeed,
) -> Result<Vec<PairSample<S>>> {
    if pair_count == 0 {
        return Err(invalid("pair count must be at least 1"));
    }
    let diameter = S::of(graph.dim() as f64).sqrt() * graph.cloud().scale();
    if !(min_separation >= S::zero() && min_separation < diameter) {
        return Err(invalid(format!("minimum separation {min_separation} must lie in [0, {diameter})")));
    }
    let pairs = sample_pairs(graph, pair_count, min_separation, false, seed)?;
    measure_pairs(graph, &pairs)
}

/// Distribution of `d_X / d_E` over random non-coincident pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct StretchSummary<S> {
    pub samples: Vec<PairSample<S>>,
    /// Largest ratio; infinite if any sampled pair is disconnected.
    pub max_ratio: S,
    pub unreachable: usize,
}

impl<S: Scalar> StretchSummary<S> {
    pub fn ratios(&self) -> Vec<S> {
        self.samples.iter().map(PairSample::ratio).collect()
    }
}

pub fn stretch_sample<S: Scalar>(
    graph: &EmbeddedGraph<S>,
    pair_count: usize,
    seed: &RngSeed,
) -> Result<StretchSummary<S>> {
    if pair_count == 0 {
        return Err(invalid("pair count must be at least 1"));
    }
    let pairs = sample_pairs(graph, pair_count, S::zero(), true, seed)?;
    let samples = measure_pairs(graph, &pairs)?;
    let unreachable = samples.iter().filter(|s| !s.is_reachable()).count();
    let max_ratio = samples.iter().map(PairSample::ratio).fold(S::zero(), S::max);
    Ok(StretchSummary { samples, max_ratio, unreachable })
}

/// Writes `d_E,d_X,excess,ratio,reachable` rows; unreachable distances
/// print as `inf`.
pub fn write_pair_csv<S: Scalar, W: Write>(samples: &[PairSample<S>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["d_E", "d_X", "excess", "ratio", "reachable"])?;
    for s in samples {
        let dx = s.graph.value().unwrap_or(S::infinity());
        w.write_record([
            s.euclidean.to_string(),
            dx.to_string(),
            s.excess().to_string(),
            s.ratio().to_string(),
            s.is_reachable().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{attach_bernoulli_edges, generate_uniform_cloud, Adjacency, PointCloud};

    fn graph(n: usize, p: f64, seed: u64) -> EmbeddedGraph<f64> {
        let c: PointCloud<f64> = generate_uniform_cloud(n, 2, &RngSeed::new(seed, "points")).unwrap();
        attach_bernoulli_edges(c, p, &RngSeed::new(seed, "edges")).unwrap()
    }

    #[test]
    fn complete_graph_has_no_excess() {
        let g = graph(200, 1.0, 1);
        let s = excess_sample(&g, 50, 0.3, &RngSeed::new(1, "pairs")).unwrap();
        assert_eq!(s.len(), 50);
        for x in &s {
            assert!(x.euclidean >= 0.3);
            assert!(x.excess().abs() < 1e-12);
        }
        let st = stretch_sample(&g, 50, &RngSeed::new(2, "pairs")).unwrap();
        assert!((st.max_ratio - 1.0).abs() < 1e-12);
        assert_eq!(st.unreachable, 0);
    }

    #[test]
    fn isolated_vertex_gives_infinite_excess() {
        let c = PointCloud::<f64>::from_points(1, 1.0, &[vec![0.0], vec![1.0]]).unwrap();
        let g = EmbeddedGraph::new(c, Adjacency::empty(2), 0.5, None, 0).unwrap();
        let s = excess_sample(&g, 3, 0.5, &RngSeed::new(1, "pairs")).unwrap();
        assert!(s.iter().all(|x| x.excess().is_infinite() && !x.is_reachable()));
        let st = stretch_sample(&g, 2, &RngSeed::new(1, "pairs")).unwrap();
        assert!(st.max_ratio.is_infinite());
        assert_eq!(st.unreachable, 2);
    }

    #[test]
    fn separation_errors() {
        let g = graph(10, 0.5, 2);
        assert!(matches!(
            excess_sample(&g, 5, 1.4, &RngSeed::new(1, "pairs")),
            Err(Error::SeparationUnattainable { .. })
        ));
        assert!(excess_sample(&g, 5, 2.0, &RngSeed::new(1, "pairs")).is_err());
        assert!(excess_sample(&g, 0, 0.1, &RngSeed::new(1, "pairs")).is_err());
    }

    #[test]
    fn off_axis_detour_ratio() {
        let c = PointCloud::from_points(2, 2.0, &[vec![0.0, 0.0], vec![1.0, 0.5], vec![2.0, 0.0]]).unwrap();
        let g = EmbeddedGraph::from_edges(c, [(0, 1), (1, 2)], 1.0, 0).unwrap();
        let st = stretch_sample(&g, 40, &RngSeed::new(3, "pairs")).unwrap();
        let expected = 2.0 * 1.25f64.sqrt() / 2.0;
        let far = st.samples.iter().find(|s| s.source.min(s.target) == 0 && s.source.max(s.target) == 2).unwrap();
        assert!((far.ratio() - expected).abs() < 1e-12);
        assert!((st.max_ratio - expected).abs() < 1e-12);

        let line = PointCloud::from_points(2, 2.0, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let g = EmbeddedGraph::from_edges(line, [(0, 1), (1, 2)], 1.0, 0).unwrap();
        let st = stretch_sample(&g, 40, &RngSeed::new(3, "pairs")).unwrap();
        assert!(st.ratios().iter().all(|&r| r == 1.0));
    }

    #[test]
    fn csv_rows() {
        let c = PointCloud::<f64>::from_points(1, 1.0, &[vec![0.0], vec![1.0]]).unwrap();
        let g = EmbeddedGraph::new(c, Adjacency::empty(2), 0.5, None, 0).unwrap();
        let s = excess_sample(&g, 1, 0.0, &RngSeed::new(1, "pairs")).unwrap();
        let mut out = Vec::new();
        write_pair_csv(&s, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "d_E,d_X,excess,ratio,reachable\n1,inf,inf,inf,false\n");
    }

    #[test]
    fn moderate_density_excess_is_small() {
        // Smaller than the acceptance instance; excess shrinks with n·p.
        let g = graph(4000, 0.2, 5);
        let s = excess_sample(&g, 30, 0.5, &RngSeed::new(5, "pairs")).unwrap();
        let mut ex: Vec<f64> = s.iter().map(PairSample::excess).collect();
        ex.sort_by(f64::total_cmp);
        assert!(ex[15] < 0.1, "median excess {}", ex[15]);
        assert!(ex.iter().all(|&e| e >= -1e-9));
    }
}

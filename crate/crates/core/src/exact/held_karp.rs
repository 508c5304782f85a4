// Held–Karp over (visited subset, last vertex) states with vertex 0 as the
// fixed start. Subsets range over vertices 1..n, bit i-1 for vertex i.
// Transitions only follow present edges.

use crate::error::{invalid, Error, Result};
use crate::exact::tiny_instance;
use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;
use crate::tour::Tour;

/// Largest instance accepted; the table holds `2^(n−1)·(n−1)` lengths.
pub const HELD_KARP_LIMIT: usize = 24;

const NO_PARENT: u8 = u8::MAX;

/// Minimum-length Hamilton cycle over present edges, `None` if there is
/// none.
pub fn held_karp<S: Scalar>(graph: &EmbeddedGraph<S>) -> Result<Option<Tour<S>>> {
    let n = graph.len();
    if n == 0 {
        return Err(invalid("exact solver needs at least one vertex"));
    }
    if n > HELD_KARP_LIMIT {
        return Err(Error::InstanceTooLarge { n, cap: HELD_KARP_LIMIT });
    }
    if let Some(tiny) = tiny_instance(graph) {
        return Ok(tiny);
    }

    let m = n - 1;
    let full: u32 = (1u32 << m) - 1;
    let dist: Vec<S> = (0..n * n).map(|i| graph.dist(i / n, i % n)).collect();
    // Neighbor masks over 1..n in subset coordinates.
    let adj: Vec<u32> =
        (0..n).map(|u| (1..n).filter(|&v| graph.has_edge(u, v)).fold(0, |acc, v| acc | 1 << (v - 1))).collect();

    let states = (1usize << m) * m;
    let mut cost = vec![S::infinity(); states];
    let mut parent = vec![NO_PARENT; states];
    let mut start = adj[0];
    while start != 0 {
        let j = start.trailing_zeros() as usize;
        start &= start - 1;
        cost[(1usize << j) * m + j] = dist[j + 1];
    }

    for mask in 1..=full {
        let base = mask as usize * m;
        let mut members = mask;
        while members != 0 {
            let j = members.trailing_zeros() as usize;
            members &= members - 1;
            let here = cost[base + j];
            if here == S::infinity() {
                continue;
            }
            let mut next = adj[j + 1] & !mask & full;
            while next != 0 {
                let k = next.trailing_zeros() as usize;
                next &= next - 1;
                let slot = (mask | 1 << k) as usize * m + k;
                let candidate = here + dist[(j + 1) * n + k + 1];
                if candidate < cost[slot] {
                    cost[slot] = candidate;
                    parent[slot] = j as u8;
                }
            }
        }
    }

    let base = full as usize * m;
    let best = (0..m)
        .filter(|&j| adj[0] >> j & 1 == 1 && cost[base + j] != S::infinity())
        .map(|j| (j, cost[base + j] + dist[j + 1]))
        .fold(None, |best: Option<(usize, S)>, (j, c)| match best {
            Some((_, b)) if b <= c => best,
            _ => Some((j, c)),
        });
    let Some((mut last, _)) = best else {
        return Ok(None);
    };

    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    loop {
        order.push(last + 1);
        let p = parent[mask as usize * m + last];
        mask &= !(1 << last);
        if p == NO_PARENT {
            break;
        }
        last = p as usize;
    }
    order.push(0);
    order.reverse();
    Ok(Some(Tour::new_unchecked(graph, order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{attach_bernoulli_edges, generate_uniform_cloud, PointCloud};
    use crate::rng::RngSeed;

    #[test]
    fn unit_square_perimeter() {
        let pts = [vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let g = EmbeddedGraph::complete(PointCloud::<f64>::from_points(2, 1.0, &pts).unwrap());
        let t = held_karp(&g).unwrap().unwrap();
        assert!((t.length() - 4.0).abs() < 1e-12);
        t.validate(&g).unwrap();
    }

    #[test]
    fn missing_triangle_edge_is_infeasible() {
        let c: PointCloud<f64> = generate_uniform_cloud(3, 2, &RngSeed::new(1, "points")).unwrap();
        let g = EmbeddedGraph::from_edges(c, [(0, 1), (1, 2)], 0.5, 0).unwrap();
        assert_eq!(held_karp(&g).unwrap(), None);
    }

    #[test]
    fn size_cap() {
        let c: PointCloud<f64> = generate_uniform_cloud(25, 2, &RngSeed::new(1, "points")).unwrap();
        let g = EmbeddedGraph::complete(c);
        assert!(matches!(held_karp(&g), Err(Error::InstanceTooLarge { n: 25, cap: 24 })));
        assert!(held_karp(&EmbeddedGraph::complete(PointCloud::<f64>::empty(2))).is_err());
    }

    #[test]
    fn convex_position_optimum_is_hull_order() {
        // Points on a circle: the optimum visits them in angular order.
        let n = 12;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * ((i * 5) % n) as f64 / n as f64;
                vec![0.5 + 0.4 * a.cos(), 0.5 + 0.4 * a.sin()]
            })
            .collect();
        let g = EmbeddedGraph::complete(PointCloud::<f64>::from_points(2, 1.0, &pts).unwrap());
        let t = held_karp(&g).unwrap().unwrap();
        let polygon = n as f64 * 2.0 * 0.4 * (std::f64::consts::PI / n as f64).sin();
        assert!((t.length() - polygon).abs() < 1e-9);
    }

    #[test]
    fn sparse_instances_stay_valid() {
        for seed in 0..20 {
            let c: PointCloud<f64> = generate_uniform_cloud(14, 2, &RngSeed::new(seed, "points")).unwrap();
            let g = attach_bernoulli_edges(c, 0.4, &RngSeed::new(seed, "edges")).unwrap();
            if let Some(t) = held_karp(&g).unwrap() {
                t.validate(&g).unwrap();
            }
        }
    }
}

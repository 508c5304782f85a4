//! Hamilton cycles over present edges.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;

/// A cyclic vertex order together with its total Euclidean length.
///
/// One vertex is the zero-length degenerate tour; two vertices traverse
/// their edge twice.
#[derive(Clone, Debug, PartialEq)]
pub struct Tour<S> {
    order: Vec<usize>,
    length: S,
}

/// Length of the closed walk through `order`, wrapping around.
pub fn cycle_length<S: Scalar>(graph: &EmbeddedGraph<S>, order: &[usize]) -> S {
    if order.len() < 2 {
        return S::zero();
    }
    let wrap = graph.dist(order[order.len() - 1], order[0]);
    order.windows(2).map(|w| graph.dist(w[0], w[1])).sum::<S>() + wrap
}

fn check_order<S: Scalar>(graph: &EmbeddedGraph<S>, order: &[usize]) -> Result<()> {
    let n = graph.len();
    if order.len() != n || n == 0 {
        return Err(Error::InvalidTour(format!("tour has {} vertices, graph has {n}", order.len())));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, len: n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidTour(format!("vertex {v} visited twice")));
        }
    }
    let pairs = match n {
        1 => 0,
        2 => 1,
        _ => n,
    };
    for i in 0..pairs {
        let (u, v) = (order[i], order[(i + 1) % n]);
        if !graph.has_edge(u, v) {
            return Err(Error::InvalidTour(format!("edge ({u},{v}) is not in the graph")));
        }
    }
    Ok(())
}

impl<S: Scalar> Tour<S> {
    /// Validates `order` against `graph` and records its length.
    pub fn new(graph: &EmbeddedGraph<S>, order: Vec<usize>) -> Result<Self> {
        check_order(graph, &order)?;
        let length = cycle_length(graph, &order);
        Ok(Self { order, length })
    }

    pub(crate) fn new_unchecked(graph: &EmbeddedGraph<S>, order: Vec<usize>) -> Self {
        let length = cycle_length(graph, &order);
        let tour = Self { order, length };
        debug_assert!(tour.validate(graph).is_ok(), "{:?}", tour.validate(graph));
        tour
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn length(&self) -> S {
        self.length
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Visits every vertex of `graph` once, uses only present edges, and
    /// the stored length matches a recomputation.
    pub fn validate(&self, graph: &EmbeddedGraph<S>) -> Result<()> {
        check_order(graph, &self.order)?;
        let recomputed = cycle_length(graph, &self.order);
        if (recomputed - self.length).abs() > S::tolerance() {
            return Err(Error::InvalidTour(format!("stored length {} but edges sum to {recomputed}", self.length)));
        }
        Ok(())
    }

    /// The same cycle starting at position `start` and optionally reversed.
    pub fn relabeled(&self, graph: &EmbeddedGraph<S>, start: usize, reverse: bool) -> Self {
        let n = self.order.len();
        let mut order: Vec<usize> = (0..n).map(|i| self.order[(start + i) % n.max(1)]).collect();
        if reverse && n > 1 {
            order[1..].reverse();
        }
        Self::new_unchecked(graph, order)
    }

    /// Newline-separated vertex indices followed by `# length <len>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.order {
            writeln!(out, "{v}").expect("String write");
        }
        writeln!(out, "# length {}", self.length).expect("String write");
        out
    }

    /// Parses [`Tour::to_text`] output and re-validates it on `graph`.
    pub fn from_text(graph: &EmbeddedGraph<S>, text: &str) -> Result<Self> {
        let mut order = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line.starts_with('#') {
                continue;
            }
            let v = line.parse().map_err(|_| Error::InvalidTour(format!("`{line}` is not a vertex index")))?;
            order.push(v);
        }
        Self::new(graph, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PointCloud;

    fn square() -> EmbeddedGraph<f64> {
        let pts = [vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        EmbeddedGraph::complete(PointCloud::from_points(2, 1.0, &pts).unwrap())
    }

    #[test]
    fn perimeter() {
        let g = square();
        let t = Tour::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert!((t.length() - 4.0).abs() < 1e-12);
        for start in 0..4 {
            for rev in [false, true] {
                let r = t.relabeled(&g, start, rev);
                assert!((r.length() - t.length()).abs() < 1e-12);
                r.validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn rejects_invalid_orders() {
        let g = square();
        assert!(Tour::new(&g, vec![0, 1, 2]).is_err());
        assert!(Tour::new(&g, vec![0, 1, 2, 2]).is_err());
        assert!(Tour::new(&g, vec![0, 1, 2, 9]).is_err());
        let sparse = EmbeddedGraph::from_edges(g.shared_cloud(), [(0, 1), (1, 2), (2, 3)], 1.0, 0).unwrap();
        assert!(Tour::new(&sparse, vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn tiny_conventions() {
        let c = PointCloud::from_points(1, 1.0, &[vec![0.25], vec![0.75]]).unwrap();
        let g = EmbeddedGraph::complete(c.clone());
        assert_eq!(Tour::new(&g, vec![1, 0]).unwrap().length(), 1.0);
        let g1 = EmbeddedGraph::complete(c.prefix(1));
        assert_eq!(Tour::new(&g1, vec![0]).unwrap().length(), 0.0);
        let none = EmbeddedGraph::from_edges(c, [], 1.0, 0).unwrap();
        assert!(Tour::new(&none, vec![0, 1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = square();
        let t = Tour::new(&g, vec![2, 3, 0, 1]).unwrap();
        let text = t.to_text();
        assert!(text.ends_with("# length 4\n"));
        assert_eq!(Tour::from_text(&g, &text).unwrap(), t);
    }
}

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::model::{Adjacency, PointCloud};
use crate::rng::RngSeed;
use crate::scalar::Scalar;

/// A point cloud with an undirected edge set. Edge weights are always the
/// Euclidean distances between endpoints.
///
/// The cloud sits behind an [`Arc`] so many edge sets can share one
/// geometry.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph<S> {
    cloud: Arc<PointCloud<S>>,
    adjacency: Adjacency,
    edge_probability: f64,
    radius: Option<S>,
    seed: u64,
}

impl<S: Scalar> EmbeddedGraph<S> {
    /// Assembles a graph, checking the adjacency invariants and the radius
    /// bound.
    pub fn new(
        cloud: impl Into<Arc<PointCloud<S>>>,
        adjacency: Adjacency,
        edge_probability: f64,
        radius: Option<S>,
        seed: u64,
    ) -> Result<Self> {
        let cloud = cloud.into();
        if adjacency.len() != cloud.len() {
            return Err(invalid(format!(
                "adjacency has {} vertices but the cloud has {} points",
                adjacency.len(),
                cloud.len()
            )));
        }
        if !(edge_probability > 0.0 && edge_probability <= 1.0) {
            return Err(invalid(format!("edge probability must be in (0,1], got {edge_probability}")));
        }
        if let Some(r) = radius {
            if !(r > S::zero()) {
                return Err(invalid(format!("radius must be positive, got {r}")));
            }
        }
        let graph = Self { cloud, adjacency, edge_probability, radius, seed };
        graph.check_invariants()?;
        Ok(graph)
    }

    pub fn from_edges(
        cloud: impl Into<Arc<PointCloud<S>>>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        edge_probability: f64,
        seed: u64,
    ) -> Result<Self> {
        let cloud = cloud.into();
        let adjacency = Adjacency::from_edges(cloud.len(), edges)?;
        Self::new(cloud, adjacency, edge_probability, None, seed)
    }

    /// Every pair joined.
    pub fn complete(cloud: impl Into<Arc<PointCloud<S>>>) -> Self {
        let cloud = cloud.into();
        let n = cloud.len();
        let adjacency = Adjacency::from_upper((0..n).map(|u| (u as u32 + 1..n as u32).collect()).collect());
        Self { cloud, adjacency, edge_probability: 1.0, radius: None, seed: 0 }
    }

    pub fn check_invariants(&self) -> Result<()> {
        self.adjacency.check_invariants()?;
        if let Some(r) = self.radius {
            if let Some((u, v)) = self.edges().find(|&(u, v)| self.cloud.distance(u, v) > r + S::tolerance()) {
                return Err(invalid(format!("edge ({u},{v}) longer than radius {r}")));
            }
        }
        Ok(())
    }

    pub fn cloud(&self) -> &PointCloud<S> {
        &self.cloud
    }

    pub fn shared_cloud(&self) -> Arc<PointCloud<S>> {
        Arc::clone(&self.cloud)
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn edge_probability(&self) -> f64 {
        self.edge_probability
    }

    pub fn radius(&self) -> Option<S> {
        self.radius
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.has_edge(u, v)
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.neighbors(u)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency.degree(u)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.edges()
    }

    /// Euclidean distance between vertices, unchecked.
    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> S {
        self.cloud.distance(u, v)
    }

    pub fn check_vertex(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange { index, len: self.len() });
        }
        Ok(())
    }

    /// Subgraph induced by `members` (sorted, distinct). Local vertex `i`
    /// is `members[i]`.
    pub fn induced(&self, members: &[usize]) -> Self {
        Self {
            cloud: Arc::new(self.cloud.select(members)),
            adjacency: self.adjacency.induced(members),
            edge_probability: self.edge_probability,
            radius: self.radius,
            seed: self.seed,
        }
    }

    /// The subgraph induced by the first `k` vertices; with a cloud
    /// generated once at the largest size this yields nested instances.
    pub fn prefix(&self, k: usize) -> Self {
        let members: Vec<usize> = (0..k.min(self.len())).collect();
        self.induced(&members)
    }

    /// Same geometry, different edges.
    pub fn with_adjacency(&self, adjacency: Adjacency) -> Result<Self> {
        Self::new(Arc::clone(&self.cloud), adjacency, self.edge_probability, self.radius, self.seed)
    }
}

impl<S: Scalar> PartialEq for EmbeddedGraph<S> {
    fn eq(&self, other: &Self) -> bool {
        *self.cloud == *other.cloud
            && self.adjacency == other.adjacency
            && self.edge_probability == other.edge_probability
            && self.radius == other.radius
            && self.seed == other.seed
    }
}

/// Joins each unordered pair independently with probability `p`.
pub fn attach_bernoulli_edges<S: Scalar>(
    cloud: impl Into<Arc<PointCloud<S>>>,
    p: f64,
    seed: &RngSeed,
) -> Result<EmbeddedGraph<S>> {
    let cloud = cloud.into();
    let adjacency = Adjacency::bernoulli(cloud.len(), p, &mut seed.rng())?;
    EmbeddedGraph::new(cloud, adjacency, p, None, seed.master)
}

/// Keeps exactly the edges of length at most `r`.
pub fn apply_geometric_filter<S: Scalar>(graph: &EmbeddedGraph<S>, r: S) -> Result<EmbeddedGraph<S>> {
    if !(r > S::zero()) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let adjacency = graph.adjacency.retain(|u, v| graph.dist(u, v) <= r);
    EmbeddedGraph::new(graph.shared_cloud(), adjacency, graph.edge_probability, Some(r), graph.seed)
}

/// `‖X_u − X_v‖₂`.
pub fn euclidean_edge_length<S: Scalar>(graph: &EmbeddedGraph<S>, u: usize, v: usize) -> Result<S> {
    graph.cloud.checked_distance(u, v)
}

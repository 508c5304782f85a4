//! Randomly embedded Erdős–Rényi graphs.
//!
//! Vertices are points in `[0, t]^d`, edges appear independently and are
//! weighted by the Euclidean distance between their endpoints. The crate
//! provides instance generation ([`model`]), shortest-path statistics
//! ([`geodesics`]), exact tours for small instances ([`exact`]), the
//! partition-and-patch tour machinery ([`construct`]) and the Monte Carlo
//! studies built on top of them ([`experiments`]).
//!
//! Geometry is generic over the coordinate type through [`Scalar`]; the
//! experiment harness works in `f64` via the aliases below.
// Negated float comparisons are used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod construct;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod geodesics;
pub mod model;
pub mod rng;
pub mod scalar;
pub mod tour;

pub use error::{Error, Result};
pub use geodesics::Reach;
pub use model::{Adjacency, BlockProcess, EmbeddedGraph, PointCloud};
pub use rng::RngSeed;
pub use scalar::Scalar;
pub use tour::Tour;

/// Double-precision point cloud.
pub type Cloud64 = PointCloud<f64>;
/// Double-precision embedded graph.
pub type Graph64 = EmbeddedGraph<f64>;
/// Double-precision tour.
pub type Tour64 = Tour<f64>;

/// Single-precision point cloud.
pub type Cloud32 = PointCloud<f32>;
/// Single-precision embedded graph.
pub type Graph32 = EmbeddedGraph<f32>;
/// Single-precision tour.
pub type Tour32 = Tour<f32>;

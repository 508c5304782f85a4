//! Instance generation: point clouds, random edge sets and the graph file
//! format.

mod adjacency;
mod block;
mod cloud;
mod graph;
mod io;

pub use adjacency::Adjacency;
pub use block::{generate_block_cloud, BlockProcess};
pub use cloud::{generate_uniform_cloud, PointCloud};
pub use graph::{apply_geometric_filter, attach_bernoulli_edges, euclidean_edge_length, EmbeddedGraph};
pub use io::{parse_graph, serialize_graph, write_graph, ParseError};

//! Random d-uniform hypergraphs observed through their graph projection.
//!
//! The crate samples hypergraphs, projects them (plain or with pair
//! multiplicities) and tries to get them back: clique cover, exact MAP
//! reconstruction, exhaustive Bayes-optimal oracles on tiny instances, and
//! the gadgets that make reconstruction ambiguous.

pub mod ambiguity;
pub mod clique;
mod cover;
pub mod density;
pub mod error;
mod flow;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod recovery;
pub mod rng;

pub use clique::{clique_hypergraph, enumerate_d_cliques, two_connected_components};
pub use density::{max_subgraph_density, DensityResult};
pub use error::{Error, Result};
pub use graph::{Observed, SimpleGraph, WeightedGraph};
pub use hypergraph::{Hypergraph, Vertex};
pub use model::ModelParams;

//! Probabilistic mappings of graph edges into spanning trees.
//!
//! A spanning tree maps every edge to the tree path between its endpoints.
//! Under a distribution over trees each edge gets an expected stretch (path
//! length over its own length) and an expected congestion (capacity routed
//! across it over its own capacity). The crate solves for distributions that
//! keep either quantity small, by linear programming over all trees or by
//! multiplicative weights against a best-response oracle, and applies them to
//! min-bisection and to planar duality.

#![no_std]

extern crate alloc;

pub mod bisection;
pub mod error;
pub mod families;
pub mod game;
pub mod graph;
pub mod mapping;
pub mod oracle;
pub mod paths;
pub mod planar;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, SpanningTree, VertexId};
pub use mapping::{MetricProfile, ProbabilisticMapping};

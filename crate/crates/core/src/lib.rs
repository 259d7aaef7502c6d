//! Adiabatic amplitude transfer on weighted semi-bipartite graphs.
//!
//! Graphs, their viability for dark-state transfer, spectral bounds on the
//! gap around zero, and the time-dependent dynamics under straddled
//! controls.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod format;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod matching;
pub mod rng;
pub mod spectral;
pub mod viability;

pub use error::{Error, Result};
pub use graph::{build_graph, AdjacencyMatrix, Edge, Part, WeightedGraph};

//! Function computation in anonymous networks.
//!
//! Vertices are numbered from 0 in the API; the JSON graph documents number
//! them from 1.

pub mod fibration;
pub mod functions;
pub mod graph;
pub mod linalg;
pub mod pushsum;
pub mod scenario;
pub mod sim;
pub mod staticfreq;

pub use graph::{DirectedMultigraph, DynamicGraph, Edge, Value};
pub use linalg::Rational;

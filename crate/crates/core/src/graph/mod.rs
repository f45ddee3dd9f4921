//! Directed multigraphs, dynamic graphs and topology generators.

mod dynamic;
pub mod generate;
pub mod io;
mod multigraph;
mod value;

pub use dynamic::{dynamic_diameter, product, window_to_complete, DynamicGraph};
pub use multigraph::{DirectedMultigraph, Edge};
pub use value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {edge} uses vertex {vertex}, graph has {n} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("vertex count mismatch: expected {expected}, found {found}")]
    VertexCountMismatch { expected: usize, found: usize },
    #[error("out-edges of vertex {0} are not labeled 1..outdegree")]
    InvalidPorts(usize),
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("round {round} has no self-loop at vertex {vertex}")]
    MissingSelfLoop { round: usize, vertex: usize },
    #[error("dynamic graph needs a non-empty repeating cycle")]
    EmptyCycle,
    #[error("unsatisfiable generator parameters: {0}")]
    Unsatisfiable(String),
    #[error("malformed graph document: {0}")]
    Format(String),
}

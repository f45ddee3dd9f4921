//! Graph morphisms, fibrations and minimum bases.

mod base;
mod iso;
mod morphism;

pub use base::{coarsest_in_stable_partition, is_fibration_prime, minimum_base, minimum_base_with, quotient};
pub use iso::{are_isomorphic, find_isomorphism};
pub use morphism::{check_fibration, is_fibration, lift_state, ring_fibration, Fibration, GraphMorphism};

use crate::graph::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error("maps do not cover every vertex and edge of the source")]
    MapLength,
    #[error("map points outside the base")]
    OutOfRange,
    #[error("edge {edge} does not commute with source/target")]
    NotHomomorphism { edge: usize },
    #[error("valuation not preserved at vertex {vertex}")]
    ValuationMismatch { vertex: usize },
    #[error("color not preserved on edge {edge}")]
    ColorMismatch { edge: usize },
    #[error("morphism is not surjective")]
    NotSurjective,
    #[error("base edge {base_edge} has {count} lifts at vertex {vertex} (incoming: {incoming})")]
    Lift { base_edge: usize, vertex: usize, count: usize, incoming: bool },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("partition is not in-stable at vertex {vertex}")]
    NotStable { vertex: usize },
    #[error("{p} does not divide {n}")]
    Divisibility { n: usize, p: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

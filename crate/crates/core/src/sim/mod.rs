//! Synchronous round engine for anonymous algorithms under the four
//! communication models.

pub mod corpus;
mod engine;

use std::fmt;
use std::str::FromStr;

pub use engine::{check_model_discipline, converged, converged_to, run, Execution, ExecutionTrace, RunOptions};

use crate::graph::{DirectedMultigraph, DynamicGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    SimpleBroadcast,
    OutdegreeAware,
    OutputPortAware,
    Symmetric,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::SimpleBroadcast, Model::OutdegreeAware, Model::OutputPortAware, Model::Symmetric];

    pub fn short_name(self) -> &'static str {
        match self {
            Model::SimpleBroadcast => "broadcast",
            Model::OutdegreeAware => "od",
            Model::OutputPortAware => "op",
            Model::Symmetric => "sym",
        }
    }

    /// Agents learn their outdegree before sending.
    pub fn knows_outdegree(self) -> bool {
        matches!(self, Model::OutdegreeAware | Model::OutputPortAware)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Model {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "broadcast" | "simple-broadcast" => Ok(Model::SimpleBroadcast),
            "od" | "outdegree-aware" => Ok(Model::OutdegreeAware),
            "op" | "output-port-aware" => Ok(Model::OutputPortAware),
            "sym" | "symmetric" => Ok(Model::Symmetric),
            other => Err(SimError::UnknownModel(other.to_string())),
        }
    }
}

/// What an agent knows locally when it transitions, besides its state and
/// the received messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LocalView {
    /// Outdegree used for sending this round (outdegree and port models).
    pub outdegree: Option<usize>,
    /// Round number, only for algorithms that ask for it.
    pub round: Option<usize>,
}

/// A deterministic anonymous algorithm.
pub trait Algorithm {
    type Input: Clone;
    type State: Clone + PartialEq + fmt::Debug;
    type Message: Clone + PartialEq + fmt::Debug;
    type Output: Clone + PartialEq + fmt::Debug;

    fn name(&self) -> String;

    fn initial_state(&self, input: &Self::Input) -> Self::State;

    /// Messages for `outdegree` recipients. Broadcast-style models call this
    /// with `outdegree = 1` and send the single message on every edge.
    fn send(&self, state: &Self::State, outdegree: usize) -> Vec<Self::Message>;

    fn transition(&self, state: &Self::State, received: &[Self::Message], local: &LocalView) -> Self::State;

    fn output(&self, state: &Self::State) -> Self::Output;

    fn supports(&self, _model: Model) -> bool {
        true
    }

    fn needs_round(&self) -> bool {
        false
    }
}

/// Communication network of an execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Network {
    /// A fixed graph. `declared_outdegrees` overrides the outdegree agents
    /// send with, which is how executions on a base use the outdegrees of
    /// the graph it was folded from.
    Static { graph: DirectedMultigraph, declared_outdegrees: Option<Vec<usize>> },
    Dynamic(DynamicGraph),
}

impl Network {
    pub fn fixed(graph: DirectedMultigraph) -> Self {
        Network::Static { graph, declared_outdegrees: None }
    }

    pub fn base(graph: DirectedMultigraph, outdegrees: Vec<usize>) -> Self {
        Network::Static { graph, declared_outdegrees: Some(outdegrees) }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Network::Static { graph, .. } => graph.vertex_count(),
            Network::Dynamic(g) => g.vertex_count(),
        }
    }

    pub fn graph_at(&self, t: usize) -> &DirectedMultigraph {
        match self {
            Network::Static { graph, .. } => graph,
            Network::Dynamic(g) => g.at(t),
        }
    }

    /// Distinct round graphs.
    pub fn round_graphs(&self) -> Vec<&DirectedMultigraph> {
        match self {
            Network::Static { graph, .. } => vec![graph],
            Network::Dynamic(g) => {
                let cycle = g.cycle();
                g.prefix().iter().chain(cycle.iter()).collect()
            }
        }
    }

    pub fn declared_outdegrees(&self) -> Option<&[usize]> {
        match self {
            Network::Static { declared_outdegrees, .. } => declared_outdegrees.as_deref(),
            Network::Dynamic(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("unknown communication model {0:?}")]
    UnknownModel(String),
    #[error("{algorithm} does not run in the {model} model")]
    Unsupported { algorithm: String, model: Model },
    #[error("expected {expected} inputs, found {found}")]
    InputCount { expected: usize, found: usize },
    #[error("expected {expected} initial states, found {found}")]
    InitCount { expected: usize, found: usize },
    #[error("expected {expected} start rounds (all >= 1), found {found}")]
    Starts { expected: usize, found: usize },
    #[error("expected {expected} declared outdegrees, found {found}")]
    DeclaredOutdegrees { expected: usize, found: usize },
    #[error("symmetric model needs bidirectional round graphs; round graph {0} is not")]
    NotBidirectional(usize),
    #[error("output-port model needs a static graph with port labels")]
    PortsRequired,
    #[error("port {port} at vertex {vertex} exceeds its outdegree {outdegree}")]
    PortOutOfRange { vertex: usize, port: usize, outdegree: usize },
    #[error("output-port model does not support asynchronous starts")]
    AsyncPorts,
}

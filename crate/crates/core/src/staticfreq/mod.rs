//! Static-network algorithm that computes frequency-based functions by
//! reconstructing the minimum base from the agent's view.

mod algorithm;
mod reconstruct;
mod solve;
mod views;

pub use algorithm::{make_static_algorithm, StaticFrequency, StaticState};
pub use reconstruct::{reconstruct_base, ReconstructedBase, Tags};
pub use solve::{apply_help, evaluate_target, solve_od, solve_op, solve_sym, FibreSolution, Scale};
pub use views::{Label, ViewId, ViewInterner, ViewNode};

use crate::functions::{FunctionError, Help, TargetFunction};
use crate::linalg::KernelError;
use crate::sim::Model;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StaticError {
    #[error("{target} cannot be computed in the {model} model with help {help}")]
    Incompatible { target: Box<TargetFunction>, model: Model, help: Help },
    #[error("empty base")]
    EmptyBase,
    #[error("base is not the target of a covering: some vertex has repeated output ports")]
    NotCovering,
    #[error("base vertices {i} and {j} are linked in one direction only")]
    ZeroCrossDegree { i: usize, j: usize },
    #[error("base is not connected")]
    Disconnected,
    #[error("balance equation between {i} and {j} fails")]
    Unbalanced { i: usize, j: usize },
    #[error("inconsistent help: {0}")]
    InconsistentHelp(String),
    #[error("fibre size does not fit in usize")]
    TooLarge,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

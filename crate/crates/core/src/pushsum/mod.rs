//! Push-Sum on dynamic networks: the scalar algorithm, its frequency
//! variant with size-bound, exact-size and leader output layers, and an
//! exact kernel for long runs.

mod frequency;
mod kernel;
mod mass;
mod report;
mod scalar;

pub use frequency::{make_frequency_pushsum, FrequencyMessage, FrequencyPushSum, FrequencyState, Weight};
pub use kernel::ExactKernel;
pub use mass::Mass;
pub use report::{
    effective_diameter, run_frequency_exact, run_scalar_exact, run_scalar_float, Arithmetic, ConvergenceReport,
    FrequencyReport, RoundSpread, FLOAT_SLACK,
};
pub use scalar::{make_pushsum, PushSum, PushSumMessage, PushSumState};

use crate::functions::{Help, TargetFunction};
use crate::sim::SimError;

/// What travels on an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WireFormat {
    /// `(y/d, z/d)`: the sender divides by its outdegree.
    #[default]
    PreDivided,
    /// `(y, z, d)`: the receiver divides.
    Raw,
}

/// Weight bookkeeping of the frequency variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WeightRule {
    /// One weight per agent shared by all values; conserves mass.
    #[default]
    SharedWeight,
    /// One weight per value, seeded when the value is first seen and
    /// padded for senders that have not seen it; drifts on irregular
    /// graphs.
    Verbatim,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PushSumError {
    #[error("no agents")]
    Empty,
    #[error("initial weight of agent {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("expected {expected} inputs, found {found}")]
    InputCount { expected: usize, found: usize },
    #[error("start rounds must be >= 1, one per agent")]
    Starts,
    #[error("{target} is not computable by Push-Sum with help {help}")]
    Incompatible { target: Box<TargetFunction>, help: Help },
    #[error("help {0} does not recover a scale")]
    NoScale(Help),
    #[error("expected {0} leaders among the inputs")]
    LeaderCount(usize),
    #[error("tolerance {0} must be positive and finite")]
    Eps(f64),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// `ceil(D n^(2D) ln(1/eps))` rounds suffice for every `x_i` to be within
/// `eps` of the quot-sum.
pub fn convergence_bound(n: usize, d: usize, eps: f64) -> usize {
    let raw = d as f64 * (n as f64).powi(2 * d as i32) * -eps.ln();
    // absorb rounding in ln so that exact products are not bumped up
    (raw - 1e-9).ceil().max(0.0) as usize
}

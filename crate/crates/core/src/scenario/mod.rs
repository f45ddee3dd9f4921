//! JSON-described experiments and the computability matrix.

mod matrix;
mod run;
mod spec;

pub use matrix::{lifting_replay, matrix_report, ring_witness, CellStatus, Family, MatrixCell, MatrixReport};
pub use run::{run_scenario, ScenarioReport, Verdict};
pub use spec::{generate_dynamic, generate_static, AlgorithmKind, DynamicSpec, GraphSpec, InitOverride, Scenario};

use crate::fibration::FibrationError;
use crate::functions::FunctionError;
use crate::graph::GraphError;
use crate::pushsum::PushSumError;
use crate::sim::SimError;
use crate::staticfreq::StaticError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl ScenarioError {
    /// 3 for a validation error, 4 for an invariant breach, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Validation(_) => 3,
            ScenarioError::Invariant(_) => 4,
            ScenarioError::Io(_) => 1,
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for ScenarioError {
            fn from(e: $t) -> Self {
                ScenarioError::Validation(e.to_string())
            }
        }
    )*};
}

validation_from!(GraphError, FunctionError, SimError, StaticError, PushSumError, FibrationError);

/// Scenarios shipped with the library, by name.
pub fn bundled(name: &str) -> Option<Scenario> {
    let text = match name {
        "star-average-od" => STAR_AVERAGE_OD,
        "ring-pushsum-exact" => RING_PUSHSUM_EXACT,
        "sym-directed-ring" => SYM_DIRECTED_RING,
        _ => return None,
    };
    Some(Scenario::from_json(text).expect("bundled scenarios parse"))
}

pub const BUNDLED: [&str; 3] = ["star-average-od", "ring-pushsum-exact", "sym-directed-ring"];

const STAR_AVERAGE_OD: &str = r#"{
  "name": "star-average-od",
  "graph": "star:3",
  "model": "od",
  "algorithm": "static-frequency",
  "function": "average",
  "inputs": [5, 1, 1],
  "rounds": 8
}"#;

const RING_PUSHSUM_EXACT: &str = r#"{
  "name": "ring-pushsum-exact",
  "graph": "ring:4:loops",
  "model": "od",
  "algorithm": "pushsum",
  "inputs": [1, 2, 3, 6],
  "rounds": 60,
  "eps": 1e-6,
  "arithmetic": "exact"
}"#;

const SYM_DIRECTED_RING: &str = r#"{
  "name": "sym-directed-ring",
  "graph": "directed-ring:3",
  "model": "sym",
  "algorithm": "static-frequency",
  "function": "max",
  "inputs": [1, 2, 3],
  "rounds": 5
}"#;

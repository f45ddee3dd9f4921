//! Frequency functions and the catalog of target functions.

mod frequency;
mod help;
mod qn;
mod target;

pub use frequency::{equivalent_in_frequency, frequency_of, multiplicities, quot_sum, FrequencyFunction};
pub use help::Help;
pub use qn::{nearest_in_qn, nearest_in_qn_clear, nearest_in_qn_exact, nearest_in_qn_f64, q_n, settled_integer, settled_usize};
pub use target::{FunctionClass, Metric, Output, TargetFunction, Threshold};

use crate::graph::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid frequency function: {0}")]
    InvalidFrequency(String),
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("value {0} is not a number")]
    NonNumeric(Value),
    #[error("{0} depends on multiplicities, not only on frequencies")]
    NeedsMultiplicities(String),
    #[error("{0} is not declared continuous in frequency")]
    NotContinuous(String),
    #[error("cannot parse {0}")]
    Parse(String),
}

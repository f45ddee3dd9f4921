//! Exact rationals, small dense matrices, integer kernels and the
//! stochastic-matrix toolkit used by the Push-Sum analysis.

mod kernel;
mod matrix;
mod rational;
mod stochastic;

pub use kernel::{balance_matrix, check_perron, kernel_generator, nullity, rank, KernelError, PerronReport};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use rational::{gcd_all, lcm_all, ratio_to_f64, Rational};
pub use stochastic::{associated_graph, backward_product, dobrushin, is_alpha_safe, pushsum_matrix, spread};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("rows of unequal length")]
    Ragged,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("matrix is not row-stochastic")]
    NotStochastic,
    #[error("empty matrix sequence")]
    Empty,
}

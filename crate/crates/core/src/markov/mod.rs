//! Absorbing Markov chains in canonical form, solved through LU
//! factorization rather than an explicit fundamental-matrix inverse.

mod chain;
mod lu;
mod matrix;

pub use chain::{
    absorption_by_power_series, absorption_probabilities, expected_steps, power_series_truncation,
    validate_chain, AbsorbingChain, AbsorptionResult, ChainDiagnostics, ChainSolver,
    ROW_SUM_TOLERANCE,
};
pub use lu::{solve_linear, LuFactorization, PIVOT_THRESHOLD};
pub use matrix::DenseMatrix;

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum MarkovError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("singular matrix: pivot {pivot:e} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("chain is not absorbing: I - Q is singular (pivot {pivot:e} in column {column})")]
    NonAbsorbingChain { column: usize, pivot: f64 },
    #[error("invalid chain: {0:?}")]
    InvalidChain(Box<ChainDiagnostics>),
    #[error("start state {start} out of range ({transient} transient states)")]
    StartOutOfRange { start: usize, transient: usize },
}

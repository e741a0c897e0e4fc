//! Exact rational arithmetic: scalars, 3-vectors, sparse matrices with exact
//! rank, and linear-program feasibility.

mod lp;
mod matrix;
mod scalar;
mod vec3;

pub use lp::{lp_feasible, Constraint, Feasibility, InfeasibilityCertificate, LinearSystem};
pub use matrix::SparseMatrix;
pub use scalar::{
    approx_f64, common_denominator, format_rational, int, is_canonical, parse_rational, rat,
    to_decimal, ExactScalar,
};
pub use vec3::Vec3;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("malformed linear system: {0}")]
    Dimension(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Exact rank of a sparse rational matrix.
pub fn matrix_rank(m: &SparseMatrix) -> usize {
    m.rank()
}

//! Simplicial complexes, boundary maps and Betti numbers, the nerve of a
//! family of translates, and hole counts of their unions.

mod complex;
mod nerve;

pub use complex::{betti, boundary_matrix, BettiReport, SimplicialComplex};
pub use nerve::{
    binomial, find_nerve_mismatch, hole_count, nerve_skeleton, upper_bound_holds,
    verify_nerve_matches, HoleReport, NerveDiff,
};

use crate::geometry::GeometryError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("dimension {needed} requested but the skeleton stops at {limit}")]
    SkeletonTooShallow { needed: usize, limit: usize },
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

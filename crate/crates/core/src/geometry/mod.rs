//! Convex polytopes in 3-space: exact hulls, membership, extremality,
//! separation, and intersection tests on translated copies.

mod body;
mod hull;
mod translate;

pub use body::{
    is_extreme_point, point_in_body, separate, separate_points, ConvexBody, Facet, Plane,
};
pub use hull::{affine_dimension, convex_hull};
pub use translate::{
    bodies_intersect, distance_lower_bound, Intersection, Role, Translate, TranslateFamily,
};

use crate::exact_math::MathError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("degenerate point set: affine dimension {affine_dim}")]
    Degenerate { affine_dim: i32 },
    #[error("intersection test needs at least one translate")]
    EmptyInput,
    #[error("invalid body: {0}")]
    Invalid(String),
    #[error(transparent)]
    Math(#[from] MathError),
}

//! Bodies and families: the warm-up body with its grid of
//! translates, and the rationalized universal body with its `3m` translates,
//! plus the predicted nerve and the witness-point checks.

mod epsilon;
mod params;
mod prediction;
mod universal;
mod warmup;
mod witnesses;

pub use epsilon::{
    choose_epsilon, choose_epsilon_with_limit, compute_eps1, compute_eps2_squared, validate_epsilon,
    EpsilonAttempt, EpsilonBudget, EpsilonRecord, ValidatedFamily, MAX_HALVINGS,
};
pub use prediction::{predicted_nerve, NervePrediction};
pub use params::{partial_zeta, ConstructionParams, ParamsRecord};
pub use universal::{
    build_body, build_family, build_grid, build_paths, offset_a, offset_b, offset_c, GridPoints,
    PathPair, UniversalBody,
};
pub use warmup::{
    build_warmup_body, build_warmup_family, warmup_points, warmup_spec, WarmupRecord, WarmupSpec,
};
pub use witnesses::{verify_witnesses, ClaimResult, WitnessFailure, WitnessReport};

use crate::geometry::GeometryError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("epsilon validation failed: {0}")]
    EpsilonValidation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

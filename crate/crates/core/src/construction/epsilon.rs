use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::prediction::{predicted_nerve, NervePrediction};
use super::universal::{build_family, UniversalBody};
use super::ConstructionError;
use crate::exact_math::{format_rational, int, rat, ExactScalar, Vec3};
use crate::geometry::{distance_lower_bound, Role, Translate, TranslateFamily};
use crate::topology::{find_nerve_mismatch, nerve_skeleton, verify_nerve_matches, NerveDiff, SimplicialComplex};

/// Default bound on the number of halvings in [`choose_epsilon`].
pub const MAX_HALVINGS: u32 = 64;

/// One step of the halving search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonAttempt {
    pub eps: String,
    /// First subset found whose intersection behaviour contradicts the
    /// predicted nerve, or `None` if the step was accepted.
    pub mismatch: Option<Vec<String>>,
}

/// The vertical step `eps` with the quantities it was checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonBudget {
    /// Lower bound on the distance from every `w_{j,k}`, `j, k` in `1..=m`,
    /// to the body: the largest facet violation divided by the normal's
    /// 1-norm.
    pub eps1: ExactScalar,
    /// Smallest squared distance between two of the points `v_{j,k} + b_j`,
    /// `j, k` in `1..=m` (`None` when there is only one such point).
    pub eps2_squared: Option<ExactScalar>,
    pub eps: ExactScalar,
    pub start: ExactScalar,
    pub halvings: u32,
    pub attempts: Vec<EpsilonAttempt>,
}

impl EpsilonBudget {
    pub fn to_record(&self) -> EpsilonRecord {
        EpsilonRecord {
            eps1: format_rational(&self.eps1),
            eps2_squared: self.eps2_squared.as_ref().map(format_rational),
            eps: format_rational(&self.eps),
            start: format_rational(&self.start),
            halvings: self.halvings,
            attempts: self.attempts.clone(),
        }
    }
}

/// Serializable view of [`EpsilonBudget`] with rationals as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonRecord {
    pub eps1: String,
    pub eps2_squared: Option<String>,
    pub eps: String,
    pub start: String,
    pub halvings: u32,
    pub attempts: Vec<EpsilonAttempt>,
}

/// A family whose nerve skeleton was computed and compared to the prediction.
#[derive(Clone, Debug)]
pub struct ValidatedFamily {
    pub eps: ExactScalar,
    pub family: TranslateFamily,
    pub prediction: NervePrediction,
    /// Nerve skeleton up to dimension 3.
    pub complex: SimplicialComplex,
    pub diff: NerveDiff,
}

/// `eps1` for the body: see [`EpsilonBudget::eps1`].
pub fn compute_eps1(body: &UniversalBody) -> Result<ExactScalar, ConstructionError> {
    let m = body.params.m;
    let k = Translate::new(Arc::clone(&body.body), Vec3::zero(), Role::Generic, 0);
    let mut best: Option<ExactScalar> = None;
    for j in 1..=m {
        for kk in 1..=m {
            let d = distance_lower_bound(&k, body.grid.w(j, kk));
            if d <= int(0) {
                return Err(ConstructionError::Certificate(format!(
                    "w_({j},{kk}) is not separated from the body"
                )));
            }
            best = Some(match best {
                Some(b) if b <= d => b,
                _ => d,
            });
        }
    }
    best.ok_or_else(|| ConstructionError::InvalidParams("m must be at least 1".into()))
}

/// `eps2` squared: see [`EpsilonBudget::eps2_squared`].
pub fn compute_eps2_squared(body: &UniversalBody) -> Option<ExactScalar> {
    let m = body.params.m;
    let mut points = Vec::new();
    for j in 1..=m {
        for k in 1..=m {
            points.push(body.grid.v(j, k) - body.grid.w(j, 0));
        }
    }
    let mut best: Option<ExactScalar> = None;
    for (a, p) in points.iter().enumerate() {
        for q in &points[a + 1..] {
            let d = (p - q).norm_squared();
            best = Some(match best {
                Some(b) if b <= d => b,
                _ => d,
            });
        }
    }
    best
}

/// Builds the family for `eps`, computes its nerve skeleton to dimension 3
/// and compares it with the predicted nerve. A mismatch is data, not an error.
pub fn validate_epsilon(body: &UniversalBody, eps: &ExactScalar) -> Result<ValidatedFamily, ConstructionError> {
    let family = build_family(body, eps)?;
    let prediction = predicted_nerve(body.params.m);
    let complex = nerve_skeleton(&family, 3).map_err(topology_error)?;
    let diff = verify_nerve_matches(&complex, &prediction).map_err(topology_error)?;
    Ok(ValidatedFamily {
        eps: eps.clone(),
        family,
        prediction,
        complex,
        diff,
    })
}

fn topology_error(e: crate::topology::TopologyError) -> ConstructionError {
    match e {
        crate::topology::TopologyError::Geometry(g) => ConstructionError::Geometry(g),
        other => ConstructionError::EpsilonValidation(other.to_string()),
    }
}

/// [`choose_epsilon_with_limit`] with [`MAX_HALVINGS`].
pub fn choose_epsilon(body: &UniversalBody) -> Result<(EpsilonBudget, ValidatedFamily), ConstructionError> {
    choose_epsilon_with_limit(body, MAX_HALVINGS)
}

/// Halving search for the vertical step.
///
/// Starts at `min(eps1, 1/(8m))`, halved until strictly below `eps1`. Each
/// candidate is screened for a single disagreeing subset, which is cheap
/// when the step is still too large; a candidate that passes the screen is
/// validated in full (nerve skeleton to dimension 3 compared with the
/// prediction) and returned together with that validation.
pub fn choose_epsilon_with_limit(
    body: &UniversalBody,
    max_halvings: u32,
) -> Result<(EpsilonBudget, ValidatedFamily), ConstructionError> {
    let m = body.params.m;
    let eps1 = compute_eps1(body)?;
    let eps2_squared = compute_eps2_squared(body);
    let cap = rat(1, 8 * m as i64);
    let start = if eps1 < cap { eps1.clone() } else { cap };
    let half = rat(1, 2);
    let mut eps = start.clone();
    let mut halvings = 0;
    while eps >= eps1 {
        eps = &eps * &half;
        halvings += 1;
    }
    let prediction = predicted_nerve(m);
    let mut attempts = Vec::new();
    loop {
        if halvings > max_halvings {
            return Err(ConstructionError::EpsilonValidation(format!(
                "no admissible step after {max_halvings} halvings; last tried {}",
                format_rational(&(&eps / &half))
            )));
        }
        let family = build_family(body, &eps)?;
        let mismatch = find_nerve_mismatch(&family, &prediction).map_err(topology_error)?;
        if mismatch.is_none() {
            let validated = validate_epsilon(body, &eps)?;
            if validated.diff.matches {
                attempts.push(EpsilonAttempt {
                    eps: format_rational(&eps),
                    mismatch: None,
                });
                let budget = EpsilonBudget {
                    eps1,
                    eps2_squared,
                    eps,
                    start,
                    halvings,
                    attempts,
                };
                return Ok((budget, validated));
            }
            let first = validated
                .diff
                .unexpected
                .first()
                .or(validated.diff.missing.first())
                .cloned();
            attempts.push(EpsilonAttempt {
                eps: format_rational(&eps),
                mismatch: first,
            });
        } else {
            attempts.push(EpsilonAttempt {
                eps: format_rational(&eps),
                mismatch,
            });
        }
        eps = &eps * &half;
        halvings += 1;
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{betti, subsets_of_size, BettiReport, SimplicialComplex};
use super::TopologyError;
use crate::construction::NervePrediction;
use crate::geometry::{bodies_intersect, TranslateFamily};

/// Subsets of at most `max_dim + 1` translates with a common point. Larger
/// candidates are only tested when all their facets are present, since the
/// nerve is downward closed. Vertex order is family order.
pub fn nerve_skeleton(family: &TranslateFamily, max_dim: usize) -> Result<SimplicialComplex, TopologyError> {
    let mut complex = SimplicialComplex::new(family.names(), Some(max_dim));
    let n = family.len();
    for d in 1..=max_dim {
        let candidates: Vec<Vec<usize>> = complex
            .simplices(d - 1)
            .into_iter()
            .flat_map(|s| {
                let last = *s.last().expect("nonempty simplex");
                (last + 1..n).map(move |v| {
                    let mut c = s.clone();
                    c.push(v);
                    c
                })
            })
            .filter(|c| {
                (0..c.len() - 1).all(|skip| {
                    let face: Vec<usize> = c
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    complex.contains(&face)
                })
            })
            .collect();
        if candidates.is_empty() {
            break;
        }
        let hits: Vec<Result<bool, TopologyError>> = candidates
            .par_iter()
            .map(|c| {
                let members: Vec<_> = c.iter().map(|&i| family.get(i)).collect();
                Ok(bodies_intersect(&members)?.is_nonempty())
            })
            .collect();
        for (c, hit) in candidates.into_iter().zip(hits) {
            if hit? {
                complex.insert_unchecked(c);
            }
        }
    }
    Ok(complex)
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Hole count of a union of `n` compact convex sets in 3-space: `β_2` of
/// the nerve plus one. The count includes the unbounded component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleReport {
    pub family_size: usize,
    /// Simplices of the nerve per dimension `0..=3`.
    pub simplex_counts: Vec<usize>,
    pub betti2: BettiReport,
    pub holes: u64,
    /// `C(n, 3) + 1`.
    pub upper_bound: u64,
    /// Closed-form expectation, when a formula applies to the family.
    pub predicted_holes: Option<u64>,
}

impl HoleReport {
    pub fn from_complex(complex: &SimplicialComplex) -> Result<Self, TopologyError> {
        let b = betti(complex, 2)?;
        let n = complex.vertex_count();
        Ok(Self {
            family_size: n,
            simplex_counts: (0..=3).map(|i| complex.count(i)).collect(),
            holes: b.betti as u64 + 1,
            betti2: b,
            upper_bound: binomial(n as u64, 3) + 1,
            predicted_holes: None,
        })
    }

    pub fn with_prediction(mut self, predicted: u64) -> Self {
        self.predicted_holes = Some(predicted);
        self
    }

    pub fn csv_header() -> &'static str {
        "m,n,c2_count,c3_count,rank_d2,rank_d3,betti2,holes,bound"
    }

    pub fn csv_row(&self, m: usize) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            m,
            self.family_size,
            self.simplex_counts[2],
            self.simplex_counts[3],
            self.betti2.rank_boundary,
            self.betti2.rank_next_boundary,
            self.betti2.betti,
            self.holes,
            self.upper_bound
        )
    }
}

/// Nerve to dimension 3, then `β_2 + 1`.
pub fn hole_count(family: &TranslateFamily) -> Result<HoleReport, TopologyError> {
    if family.is_empty() {
        return Err(TopologyError::Invalid("empty family".into()));
    }
    HoleReport::from_complex(&nerve_skeleton(family, 3)?)
}

/// At most `C(n, 3) + 1` holes.
pub fn upper_bound_holds(report: &HoleReport) -> bool {
    report.holes <= report.upper_bound
}

/// Differences between a computed nerve skeleton and a predicted nerve,
/// restricted to subsets of at most four members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveDiff {
    pub matches: bool,
    /// Stored in the complex but not inside any predicted family.
    pub unexpected: Vec<Vec<String>>,
    /// Inside a predicted family but absent from the complex.
    pub missing: Vec<Vec<String>>,
}

/// Compares every simplex of size at most four in `complex` with the
/// downward closure of `prediction`.
pub fn verify_nerve_matches(
    complex: &SimplicialComplex,
    prediction: &NervePrediction,
) -> Result<NerveDiff, TopologyError> {
    if let Some(limit) = complex.skeleton_limit() {
        if limit < 3 {
            return Err(TopologyError::SkeletonTooShallow { needed: 3, limit });
        }
    }
    if complex.vertex_count() != prediction.names.len() {
        return Err(TopologyError::Invalid(format!(
            "complex has {} vertices, prediction {}",
            complex.vertex_count(),
            prediction.names.len()
        )));
    }
    let expected = prediction.to_complex(Some(3));
    let mut unexpected = Vec::new();
    let mut missing = Vec::new();
    for d in 0..=3 {
        for s in complex.simplices(d) {
            if !expected.contains(s) {
                unexpected.push(complex.names_of(s));
            }
        }
        for s in expected.simplices(d) {
            if !complex.contains(s) {
                missing.push(complex.names_of(s));
            }
        }
    }
    Ok(NerveDiff {
        matches: unexpected.is_empty() && missing.is_empty(),
        unexpected,
        missing,
    })
}

/// Searches for one subset of at most four translates on which the nerve
/// of `family` disagrees with `prediction`, without building the nerve.
///
/// The nerve agrees with the prediction up to size four exactly when every
/// predicted subset meets and every minimal non-predicted subset (one whose
/// facets are all predicted) does not: the smallest wrongly meeting subset
/// is always such a minimal one. Minimal non-predicted subsets are tried
/// first, largest first, because that is where a too large shift shows up.
pub fn find_nerve_mismatch(
    family: &TranslateFamily,
    prediction: &NervePrediction,
) -> Result<Option<Vec<String>>, TopologyError> {
    let n = family.len();
    if n != prediction.names.len() {
        return Err(TopologyError::Invalid("family and prediction sizes differ".into()));
    }
    let expected = prediction.to_complex(Some(3));
    let meets = |s: &[usize]| -> Result<bool, TopologyError> {
        let members: Vec<_> = s.iter().map(|&i| family.get(i)).collect();
        Ok(bodies_intersect(&members)?.is_nonempty())
    };
    let all: Vec<usize> = (0..n).collect();
    for size in (2..=4).rev() {
        for s in subsets_of_size(&all, size) {
            if expected.contains(&s) {
                continue;
            }
            let minimal = (0..size).all(|skip| {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != skip)
                    .map(|(_, &v)| v)
                    .collect();
                expected.contains(&face)
            });
            if minimal && meets(&s)? {
                return Ok(Some(expected.names_of(&s)));
            }
        }
    }
    for d in (1..=3).rev() {
        for s in expected.simplices(d) {
            if !meets(s)? {
                return Ok(Some(expected.names_of(s)));
            }
        }
    }
    Ok(None)
}

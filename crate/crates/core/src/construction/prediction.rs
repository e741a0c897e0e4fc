use serde::{Deserialize, Serialize};

use crate::topology::{binomial, SimplicialComplex};

/// The inclusion-maximal subfamilies of the nerve of the `3m` translates,
/// as index sets in family order `A_1..A_m, B_1..B_m, C_1..C_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NervePrediction {
    pub m: usize,
    pub names: Vec<String>,
    pub maximal: Vec<Vec<usize>>,
}

impl NervePrediction {
    pub fn a(&self, i: usize) -> usize {
        i - 1
    }

    pub fn b(&self, j: usize) -> usize {
        self.m + j - 1
    }

    pub fn c(&self, k: usize) -> usize {
        2 * self.m + k - 1
    }

    /// Whether `subset` (sorted or not) lies inside some maximal family.
    pub fn contains(&self, subset: &[usize]) -> bool {
        self.maximal
            .iter()
            .any(|face| subset.iter().all(|v| face.binary_search(v).is_ok()))
    }

    /// Downward closure truncated at `skeleton_limit`.
    pub fn to_complex(&self, skeleton_limit: Option<usize>) -> SimplicialComplex {
        SimplicialComplex::from_maximal(self.names.clone(), &self.maximal, skeleton_limit)
    }

    /// `m^3 + m(m-1) + 2 C(2m,3) - C(m,3)`.
    pub fn expected_two_simplices(&self) -> u64 {
        let m = self.m as u64;
        m.pow(3) + m * (m - 1) + 2 * binomial(2 * m, 3) - binomial(m, 3)
    }

    /// `m^3 - m`.
    pub fn expected_betti2(&self) -> u64 {
        let m = self.m as u64;
        m.pow(3) - m
    }

    /// `m^3 - m + 1`, counting the unbounded component.
    pub fn expected_holes(&self) -> u64 {
        self.expected_betti2() + 1
    }
}

/// The families `A ∪ B`, `B ∪ C`, `{A_i, C_k, C_(k+1)}` and `{A_i, B_j, C_k}`,
/// keeping only the inclusion-maximal ones (for `m = 1` the first two sit
/// inside `{A_1, B_1, C_1}`).
pub fn predicted_nerve(m: usize) -> NervePrediction {
    let mut names = Vec::with_capacity(3 * m);
    for prefix in ["A", "B", "C"] {
        for i in 1..=m {
            names.push(format!("{prefix}{i}"));
        }
    }
    let mut p = NervePrediction {
        m,
        names,
        maximal: Vec::new(),
    };
    let mut families: Vec<Vec<usize>> = Vec::new();
    families.push((0..2 * m).collect());
    families.push((m..3 * m).collect());
    for i in 1..=m {
        for k in 1..m {
            families.push(vec![p.a(i), p.c(k), p.c(k + 1)]);
        }
    }
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=m {
                families.push(vec![p.a(i), p.b(j), p.c(k)]);
            }
        }
    }
    let is_subset = |small: &Vec<usize>, big: &Vec<usize>| {
        small.len() < big.len() && small.iter().all(|v| big.binary_search(v).is_ok())
    };
    let maximal: Vec<Vec<usize>> = families
        .iter()
        .filter(|f| !families.iter().any(|g| is_subset(f, g)))
        .cloned()
        .collect();
    p.maximal = maximal;
    p
}

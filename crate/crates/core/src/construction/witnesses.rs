use serde::{Deserialize, Serialize};

use super::universal::{offset_a, offset_b, UniversalBody};
use crate::exact_math::{int, ExactScalar, Vec3};
use crate::geometry::{Role, Translate, TranslateFamily};

/// A witness point that is missing from one of the translates it should lie in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFailure {
    pub point: String,
    pub translate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: u8,
    pub statement: String,
    /// Number of (point, translate) memberships tested.
    pub checks: usize,
    pub passed: bool,
    pub failures: Vec<WitnessFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub claims: Vec<ClaimResult>,
}

impl WitnessReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

struct Claim<'a> {
    family: &'a TranslateFamily,
    result: ClaimResult,
}

impl<'a> Claim<'a> {
    fn new(family: &'a TranslateFamily, claim: u8, statement: &str) -> Self {
        Self {
            family,
            result: ClaimResult {
                claim,
                statement: statement.to_string(),
                checks: 0,
                passed: true,
                failures: Vec::new(),
            },
        }
    }

    fn member(&mut self, p: &Vec3, role: Role, index: usize) {
        self.result.checks += 1;
        let found: Option<&Translate> = self.family.find(role, index);
        if !found.is_some_and(|t| t.contains(p)) {
            self.result.passed = false;
            self.result.failures.push(WitnessFailure {
                point: p.to_string(),
                translate: found.map_or_else(|| format!("{role:?}{index} (absent)"), Translate::name),
            });
        }
    }
}

/// The four explicit intersection witnesses of the family:
///
/// 1. `w_{0,k+1} + a_i` lies in `A_i`, `C_k`, `C_{k+1}` for `i` in `1..=m`, `k` in `1..m`;
/// 2. `v_{j,k} + a_i + b_j` lies in `A_i`, `B_j`, `C_k` for all `i, j, k` in `1..=m`;
/// 3. `(0, -1, 0)` lies in every `A_i` and `B_j`;
/// 4. `(zeta2, t, -1)` lies in every `B_j` and `C_k`.
pub fn verify_witnesses(body: &UniversalBody, family: &TranslateFamily, eps: &ExactScalar) -> WitnessReport {
    let m = body.params.m;
    let mut claims = Vec::new();

    let mut c1 = Claim::new(family, 1, "w_(0,k+1) + a_i in A_i, C_k, C_(k+1)");
    for i in 1..=m {
        for k in 1..m {
            let p = body.grid.w(0, k + 1) + &offset_a(i, m, eps);
            c1.member(&p, Role::A, i);
            c1.member(&p, Role::C, k);
            c1.member(&p, Role::C, k + 1);
        }
    }
    claims.push(c1.result);

    let mut c2 = Claim::new(family, 2, "v_(j,k) + a_i + b_j in A_i, B_j, C_k");
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=m {
                let p = &(body.grid.v(j, k) + &offset_a(i, m, eps)) + &offset_b(body, j);
                c2.member(&p, Role::A, i);
                c2.member(&p, Role::B, j);
                c2.member(&p, Role::C, k);
            }
        }
    }
    claims.push(c2.result);

    let mut c3 = Claim::new(family, 3, "(0,-1,0) in every A_i and B_j");
    let p3 = Vec3::from_ints(0, -1, 0);
    for i in 1..=m {
        c3.member(&p3, Role::A, i);
    }
    for j in 1..=m {
        c3.member(&p3, Role::B, j);
    }
    claims.push(c3.result);

    let mut c4 = Claim::new(family, 4, "(zeta2,t,-1) in every B_j and C_k");
    let p4 = Vec3::new(body.params.zeta2.clone(), body.params.t.clone(), int(-1));
    for j in 1..=m {
        c4.member(&p4, Role::B, j);
    }
    for k in 1..=m {
        c4.member(&p4, Role::C, k);
    }
    claims.push(c4.result);

    WitnessReport { claims }
}

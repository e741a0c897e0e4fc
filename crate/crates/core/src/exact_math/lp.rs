//! Exact feasibility for systems of linear inequalities and equalities.
//!
//! For `A x <= b, C x = d` with free `x`, Farkas' lemma gives exactly one of
//!
//! * a point `x` satisfying the system, or
//! * multipliers `y >= 0`, `z` with `A^T y + C^T z = 0` and `b.y + d.z = -1`.
//!
//! We run a phase-one simplex (Bland's rule) on the multiplier system. Its
//! tableau has only `vars + 1` rows, which keeps the 3-variable intersection
//! tests cheap no matter how many facets are stacked. A zero phase-one
//! optimum yields the certificate of infeasibility; a positive optimum makes
//! the simplex multipliers, rescaled, a feasible point. Both outcomes are
//! re-checked by substitution before being returned.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::ExactScalar;
use super::MathError;

/// One constraint `normal . x  (<= | =)  offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<ExactScalar>,
    pub offset: ExactScalar,
}

impl Constraint {
    pub fn new(normal: Vec<ExactScalar>, offset: ExactScalar) -> Self {
        Self { normal, offset }
    }

    pub fn evaluate(&self, point: &[ExactScalar]) -> ExactScalar {
        self.normal
            .iter()
            .zip(point)
            .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub vars: usize,
    pub inequalities: Vec<Constraint>,
    pub equalities: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            ..Self::default()
        }
    }

    /// Adds `normal . x <= offset`.
    pub fn add_le(&mut self, normal: Vec<ExactScalar>, offset: ExactScalar) -> &mut Self {
        self.inequalities.push(Constraint::new(normal, offset));
        self
    }

    /// Adds `normal . x >= offset`.
    pub fn add_ge(&mut self, normal: Vec<ExactScalar>, offset: ExactScalar) -> &mut Self {
        let normal = normal.into_iter().map(|a| -a).collect();
        self.inequalities.push(Constraint::new(normal, -offset));
        self
    }

    /// Adds `normal . x = offset`.
    pub fn add_eq(&mut self, normal: Vec<ExactScalar>, offset: ExactScalar) -> &mut Self {
        self.equalities.push(Constraint::new(normal, offset));
        self
    }

    fn validate(&self) -> Result<(), MathError> {
        for (kind, list) in [("inequality", &self.inequalities), ("equality", &self.equalities)] {
            if let Some((i, c)) = list.iter().enumerate().find(|(_, c)| c.normal.len() != self.vars) {
                return Err(MathError::Dimension(format!(
                    "{kind} {i} has {} coefficients, system has {} variables",
                    c.normal.len(),
                    self.vars
                )));
            }
        }
        Ok(())
    }

    /// True iff `point` satisfies every constraint exactly.
    pub fn is_satisfied_by(&self, point: &[ExactScalar]) -> bool {
        point.len() == self.vars
            && self.inequalities.iter().all(|c| c.evaluate(point) <= c.offset)
            && self.equalities.iter().all(|c| c.evaluate(point) == c.offset)
    }

    /// True iff the multipliers prove that no point satisfies the system.
    pub fn is_infeasibility_certificate(&self, cert: &InfeasibilityCertificate) -> bool {
        if cert.inequality_multipliers.len() != self.inequalities.len()
            || cert.equality_multipliers.len() != self.equalities.len()
            || cert.inequality_multipliers.iter().any(Signed::is_negative)
        {
            return false;
        }
        let mut combo = vec![BigRational::zero(); self.vars];
        let mut rhs = BigRational::zero();
        let pairs = self
            .inequalities
            .iter()
            .zip(&cert.inequality_multipliers)
            .chain(self.equalities.iter().zip(&cert.equality_multipliers));
        for (c, mult) in pairs {
            if mult.is_zero() {
                continue;
            }
            for (acc, a) in combo.iter_mut().zip(&c.normal) {
                *acc += a * mult;
            }
            rhs += &c.offset * mult;
        }
        combo.iter().all(Zero::is_zero) && rhs.is_negative()
    }
}

/// Multipliers `y >= 0` (inequalities) and `z` (equalities) combining the
/// system into the contradiction `0 <= negative`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub inequality_multipliers: Vec<ExactScalar>,
    pub equality_multipliers: Vec<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<ExactScalar>),
    Infeasible(InfeasibilityCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[ExactScalar]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }
}

/// Decides feasibility of `system` exactly.
pub fn lp_feasible(system: &LinearSystem) -> Result<Feasibility, MathError> {
    system.validate()?;
    let n = system.vars;
    let n_ineq = system.inequalities.len();
    let n_eq = system.equalities.len();
    let n_struct = n_ineq + 2 * n_eq;
    let n_cols = n_struct + n + 1;
    let rhs_col = n_cols;
    let rows = n + 1;

    // Row r < n: coefficient of variable r; row n: offsets, negated so that
    // every right-hand side is nonnegative (0,...,0,1).
    let mut tableau = vec![vec![BigRational::zero(); n_cols + 1]; rows];
    let column_of = |c: &Constraint, r: usize| -> ExactScalar {
        if r < n {
            c.normal[r].clone()
        } else {
            -c.offset.clone()
        }
    };
    for (j, c) in system.inequalities.iter().enumerate() {
        for (r, row) in tableau.iter_mut().enumerate() {
            row[j] = column_of(c, r);
        }
    }
    for (e, c) in system.equalities.iter().enumerate() {
        for (r, row) in tableau.iter_mut().enumerate() {
            let v = column_of(c, r);
            row[n_ineq + 2 * e + 1] = -v.clone();
            row[n_ineq + 2 * e] = v;
        }
    }
    for (r, row) in tableau.iter_mut().enumerate() {
        row[n_struct + r] = BigRational::one();
    }
    tableau[n][rhs_col] = BigRational::one();
    let mut basis: Vec<usize> = (n_struct..n_struct + rows).collect();

    // Reduced costs for cost 1 on artificials; last entry is minus the objective.
    let mut costs = vec![BigRational::zero(); n_cols + 1];
    for row in &tableau {
        for (j, v) in row.iter().enumerate() {
            if j < n_struct || j == rhs_col {
                costs[j] -= v;
            }
        }
    }

    while let Some(enter) = (0..n_cols).find(|&j| costs[j].is_negative()) {
        let mut leave: Option<(usize, ExactScalar)> = None;
        for (r, row) in tableau.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[rhs_col] / &row[enter];
            let better = match &leave {
                None => true,
                Some((best_r, best)) => {
                    ratio < *best || (ratio == *best && basis[r] < basis[*best_r])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let (pivot_row, _) = leave.ok_or_else(|| {
            MathError::Internal("phase-one objective unbounded".to_string())
        })?;
        pivot(&mut tableau, &mut costs, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let objective = -costs[rhs_col].clone();
    if objective.is_zero() {
        let mut values = vec![BigRational::zero(); n_struct];
        for (r, &b) in basis.iter().enumerate() {
            if b < n_struct {
                values[b] = tableau[r][rhs_col].clone();
            }
        }
        let cert = InfeasibilityCertificate {
            inequality_multipliers: values[..n_ineq].to_vec(),
            equality_multipliers: (0..n_eq)
                .map(|e| &values[n_ineq + 2 * e] - &values[n_ineq + 2 * e + 1])
                .collect(),
        };
        if !system.is_infeasibility_certificate(&cert) {
            return Err(MathError::Internal(
                "infeasibility certificate failed re-verification".to_string(),
            ));
        }
        return Ok(Feasibility::Infeasible(cert));
    }

    // Simplex multipliers of the (sign-adjusted) rows; the row-n sign flip
    // cancels against dividing by the objective.
    let witness: Vec<ExactScalar> = (0..n)
        .map(|r| (BigRational::one() - &costs[n_struct + r]) / &objective)
        .collect();
    if !system.is_satisfied_by(&witness) {
        return Err(MathError::Internal(
            "feasible witness failed re-verification".to_string(),
        ));
    }
    Ok(Feasibility::Feasible(witness))
}

fn pivot(tableau: &mut [Vec<ExactScalar>], costs: &mut [ExactScalar], row: usize, col: usize) {
    let inv = BigRational::one() / &tableau[row][col];
    for v in tableau[row].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = tableau[row].clone();
    let eliminate = |target: &mut [ExactScalar]| {
        let factor = target[col].clone();
        if factor.is_zero() {
            return;
        }
        for (t, p) in target.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *t -= &factor * p;
            }
        }
    };
    for (r, target) in tableau.iter_mut().enumerate() {
        if r != row {
            eliminate(target);
        }
    }
    eliminate(costs);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::scalar::{int, rat};

    fn interval(lo: i64, hi: i64) -> LinearSystem {
        let mut s = LinearSystem::new(1);
        s.add_ge(vec![int(1)], int(lo)).add_le(vec![int(1)], int(hi));
        s
    }

    #[test]
    fn unit_interval_is_feasible() {
        let res = lp_feasible(&interval(0, 1)).unwrap();
        let x = res.witness().expect("feasible");
        assert!(x[0] >= int(0) && x[0] <= int(1));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let sys = interval(1, 0);
        match lp_feasible(&sys).unwrap() {
            Feasibility::Infeasible(cert) => assert!(sys.is_infeasibility_certificate(&cert)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn shifted_cubes_overlap() {
        let mut sys = LinearSystem::new(3);
        for axis in 0..3 {
            let mut e = vec![int(0); 3];
            e[axis] = int(1);
            sys.add_ge(e.clone(), int(0)).add_le(e.clone(), int(1));
            sys.add_ge(e.clone(), rat(1, 2)).add_le(e, rat(3, 2));
        }
        let witness = vec![rat(3, 4); 3];
        assert!(sys.is_satisfied_by(&witness));
        let x = lp_feasible(&sys).unwrap();
        let x = x.witness().unwrap();
        assert!(x.iter().all(|c| *c >= rat(1, 2) && *c <= int(1)));
    }

    #[test]
    fn equalities_are_respected() {
        let mut sys = LinearSystem::new(2);
        sys.add_eq(vec![int(1), int(1)], int(1))
            .add_ge(vec![int(1), int(0)], int(0))
            .add_ge(vec![int(0), int(1)], int(0))
            .add_eq(vec![int(1), int(-1)], rat(1, 3));
        let x = lp_feasible(&sys).unwrap();
        assert_eq!(x.witness().unwrap(), &[rat(2, 3), rat(1, 3)]);

        sys.add_ge(vec![int(0), int(1)], rat(1, 2));
        assert!(!lp_feasible(&sys).unwrap().is_feasible());
    }

    #[test]
    fn zero_variable_systems() {
        let mut ok = LinearSystem::new(0);
        ok.add_le(vec![], int(0));
        assert!(lp_feasible(&ok).unwrap().is_feasible());
        let mut bad = LinearSystem::new(0);
        bad.add_le(vec![], int(-1));
        assert!(!lp_feasible(&bad).unwrap().is_feasible());
    }

    #[test]
    fn mismatched_widths_are_rejected() {
        let mut sys = LinearSystem::new(2);
        sys.add_le(vec![int(1)], int(0));
        assert!(matches!(lp_feasible(&sys), Err(MathError::Dimension(_))));
    }
}

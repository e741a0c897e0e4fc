//! The rationalized universal body: two convex paths, the grid they span,
//! the front/back point clouds, their hull, and the `3m` translates.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::params::ConstructionParams;
use super::ConstructionError;
use crate::exact_math::{int, ExactScalar, Vec3};
use crate::geometry::{convex_hull, separate_points, ConvexBody, Plane, Role, Translate, TranslateFamily};

/// The horizontal path `gamma` (in `z = 0`) and the vertical path `eta`
/// (in `x = 0`), each ending with its surrogate limit vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPair {
    /// `w_{0,0}, ..., w_{0,M}, w_{0,inf}`.
    pub gamma: Vec<Vec3>,
    /// `w_{0,0}, ..., w_{J,0}, w_{inf,0}`.
    pub eta: Vec<Vec3>,
}

impl PathPair {
    pub fn gamma_limit(&self) -> &Vec3 {
        self.gamma.last().expect("nonempty path")
    }

    pub fn eta_limit(&self) -> &Vec3 {
        self.eta.last().expect("nonempty path")
    }

    /// `gamma` lies in `z = 0` and is convex in direction `(0,-1,0)`:
    /// `x` strictly increases and every turn is a strict right turn.
    pub fn gamma_is_convex(&self) -> bool {
        self.gamma.iter().all(|p| p.z == int(0))
            && strictly_concave_graph(&self.gamma, |p| (p.x.clone(), p.y.clone()))
    }

    /// `eta` lies in `x = 0` and is convex in directions `(0,-1,0)` and
    /// `(0,0,-1)`: along `s = -y` both `s` and `z` strictly increase and the
    /// graph `z(s)` turns strictly right.
    pub fn eta_is_convex(&self) -> bool {
        self.eta.iter().all(|p| p.x == int(0))
            && strictly_concave_graph(&self.eta, |p| (-p.y.clone(), p.z.clone()))
            && self.eta.windows(2).all(|w| w[1].z > w[0].z)
    }
}

fn strictly_concave_graph(points: &[Vec3], project: impl Fn(&Vec3) -> (ExactScalar, ExactScalar)) -> bool {
    let proj: Vec<(ExactScalar, ExactScalar)> = points.iter().map(project).collect();
    let increasing = proj.windows(2).all(|w| w[1].0 > w[0].0);
    let right_turns = proj.windows(3).all(|w| {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let turn = (&b.0 - &a.0) * (&c.1 - &b.1) - (&b.1 - &a.1) * (&c.0 - &b.0);
        turn.is_negative()
    });
    increasing && right_turns
}

fn inv_pow(k: usize, e: usize) -> ExactScalar {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(k), e))
}

/// Builds `gamma` and `eta` from the increments `(1/k^2, 1/k^3, 0)` and
/// `(0, -1/j^2, 1/j^3)`.
pub fn build_paths(params: &ConstructionParams) -> Result<PathPair, ConstructionError> {
    params.validate()?;
    let mut gamma = vec![Vec3::zero()];
    for k in 1..=params.gamma_length {
        let step = Vec3::new(inv_pow(k, 2), inv_pow(k, 3), int(0));
        gamma.push(gamma.last().expect("nonempty") + &step);
    }
    gamma.push(Vec3::new(params.zeta2.clone(), params.zeta3.clone(), int(0)));
    let mut eta = vec![Vec3::zero()];
    for j in 1..=params.path_depth {
        let step = Vec3::new(int(0), -inv_pow(j, 2), inv_pow(j, 3));
        eta.push(eta.last().expect("nonempty") + &step);
    }
    eta.push(Vec3::new(int(0), -params.zeta2.clone(), params.zeta3.clone()));
    let paths = PathPair { gamma, eta };
    if !paths.gamma_is_convex() {
        return Err(ConstructionError::Certificate(
            "gamma is not convex in direction (0,-1,0) with these surrogates".into(),
        ));
    }
    if !paths.eta_is_convex() {
        return Err(ConstructionError::Certificate(
            "eta is not convex in directions (0,-1,0), (0,0,-1) with these surrogates".into(),
        ));
    }
    Ok(paths)
}

/// Grid points `w_{j,k} = w_{j,0} + w_{0,k}` and path vertices `v_{j,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoints {
    pub depth: usize,
    pub length: usize,
    /// `(j, k)` for `j <= J`, `k <= M`.
    pub w: BTreeMap<(usize, usize), Vec3>,
    /// `(j, k)` for `j <= J`, `k < M`; lies on the segment `w_{j,k} w_{j,k+1}`.
    pub v: BTreeMap<(usize, usize), Vec3>,
}

impl GridPoints {
    pub fn w(&self, j: usize, k: usize) -> &Vec3 {
        &self.w[&(j, k)]
    }

    pub fn v(&self, j: usize, k: usize) -> &Vec3 {
        &self.v[&(j, k)]
    }

    /// Weight of `w_{j,k}` in `v_{j,k}`: `1/(j+1)^3`.
    pub fn v_weight(j: usize) -> ExactScalar {
        inv_pow(j + 1, 3)
    }
}

pub fn build_grid(params: &ConstructionParams, paths: &PathPair) -> GridPoints {
    let (depth, length) = (params.path_depth, params.gamma_length);
    let mut w = BTreeMap::new();
    for j in 0..=depth {
        for k in 0..=length {
            w.insert((j, k), &paths.eta[j] + &paths.gamma[k]);
        }
    }
    let mut v = BTreeMap::new();
    for j in 0..=depth {
        let weight = GridPoints::v_weight(j);
        for k in 0..length {
            // weight * w_{j,k} + (1 - weight) * w_{j,k+1}
            let point = w[&(j, k + 1)].lerp(&w[&(j, k)], &weight);
            v.insert((j, k), point);
        }
    }
    GridPoints { depth, length, w, v }
}

/// The finite body `conv(Front ∪ Back)` with everything needed to place
/// translates and check claims about it.
#[derive(Clone, Debug)]
pub struct UniversalBody {
    pub params: ConstructionParams,
    pub paths: PathPair,
    pub grid: GridPoints,
    /// `(zeta2, -t, 0)`.
    pub u0: Vec3,
    /// `(zeta2, -t, zeta3)`.
    pub u1: Vec3,
    pub front_points: Vec<Vec3>,
    pub back_points: Vec<Vec3>,
    /// Strictly separates the front and back point sets.
    pub separator: Plane,
    pub body: Arc<ConvexBody>,
}

impl UniversalBody {
    /// `w_{j,inf} = w_{j,0} + w_{0,inf}`.
    pub fn w_limit(&self, j: usize) -> Vec3 {
        &self.paths.eta[j] + self.paths.gamma_limit()
    }

    /// Path vertices of the truncated path `j`: `w_{j,0}, v_{j,0..M}, w_{j,inf}`
    /// (for `j = 0` the point `w_{0,M}` is kept so the path equals `gamma`).
    pub fn front_path(&self, j: usize) -> Vec<Vec3> {
        let mut path = vec![self.grid.w(j, 0).clone()];
        for k in 0..self.grid.length {
            path.push(self.grid.v(j, k).clone());
        }
        if j == 0 {
            path.push(self.grid.w(0, self.grid.length).clone());
        }
        path.push(self.w_limit(j));
        path.dedup();
        path
    }

    /// Edge `E_k = w_{0,k} w_{0,k+1}`.
    pub fn edge(&self, k: usize) -> (&Vec3, &Vec3) {
        (&self.paths.gamma[k], &self.paths.gamma[k + 1])
    }
}

/// Builds the rationalized body. Fails if the front and back clouds are not
/// strictly separable for the chosen `t`.
pub fn build_body(params: &ConstructionParams) -> Result<UniversalBody, ConstructionError> {
    let paths = build_paths(params)?;
    let grid = build_grid(params, &paths);
    let u0 = Vec3::new(params.zeta2.clone(), -params.t.clone(), int(0));
    let u1 = Vec3::new(params.zeta2.clone(), -params.t.clone(), params.zeta3.clone());

    let gamma_hat = &paths.gamma;
    let mut front_points = Vec::new();
    for j in 0..=params.path_depth {
        front_points.push(grid.w(j, 0).clone());
        for k in 0..params.gamma_length {
            front_points.push(grid.v(j, k).clone());
        }
        if j == 0 {
            front_points.push(grid.w(0, params.gamma_length).clone());
        }
        front_points.push(&paths.eta[j] + paths.gamma_limit());
    }
    for g in gamma_hat {
        front_points.push(paths.eta_limit() + g);
    }
    front_points.sort();
    front_points.dedup();

    let mut back_points = Vec::new();
    for g in gamma_hat {
        back_points.push(&u0 - g);
        back_points.push(&u1 - g);
    }
    back_points.sort();
    back_points.dedup();

    let separator = separate_points(&front_points, &back_points).ok_or_else(|| {
        ConstructionError::Certificate(
            "front and back parts are not strictly separable; increase t".into(),
        )
    })?;

    let mut all = front_points.clone();
    all.extend(back_points.iter().cloned());
    let body = convex_hull(&all)?.with_label(format!("K(m={})", params.m));

    Ok(UniversalBody {
        params: params.clone(),
        paths,
        grid,
        u0,
        u1,
        front_points,
        back_points,
        separator,
        body: Arc::new(body),
    })
}

/// The three translate offsets.
pub fn offset_a(i: usize, m: usize, eps: &ExactScalar) -> Vec3 {
    let scale = BigRational::new(BigInt::from(i), BigInt::from(m));
    Vec3::new(int(0), int(0), -(eps * scale))
}

pub fn offset_b(body: &UniversalBody, j: usize) -> Vec3 {
    -body.grid.w(j, 0)
}

pub fn offset_c(body: &UniversalBody, k: usize) -> Vec3 {
    &(body.grid.w(0, k) + body.grid.w(0, k + 1)) - &body.u1
}

/// `A_1..A_m, B_1..B_m, C_1..C_m` in that order.
pub fn build_family(body: &UniversalBody, eps: &ExactScalar) -> Result<TranslateFamily, ConstructionError> {
    if !eps.is_positive() {
        return Err(ConstructionError::InvalidParams("eps must be positive".into()));
    }
    let m = body.params.m;
    let k_body = Arc::clone(&body.body);
    let mut translates = Vec::with_capacity(3 * m);
    for i in 1..=m {
        translates.push(Translate::new(k_body.clone(), offset_a(i, m, eps), Role::A, i));
    }
    for j in 1..=m {
        translates.push(Translate::new(k_body.clone(), offset_b(body, j), Role::B, j));
    }
    for k in 1..=m {
        translates.push(Translate::new(k_body.clone(), offset_c(body, k), Role::C, k));
    }
    Ok(TranslateFamily::new(translates)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::rat;
    use crate::geometry::is_extreme_point;

    #[test]
    fn path_vertices_match_increments() {
        let p = ConstructionParams::new(2);
        let paths = build_paths(&p).unwrap();
        assert_eq!(paths.gamma[1], Vec3::from_ints(1, 1, 0));
        assert_eq!(paths.eta[2], Vec3::new(rat(0, 1), rat(-5, 4), rat(9, 8)));
        assert_eq!(paths.gamma.len(), p.gamma_length + 2);
        assert_eq!(paths.eta.len(), p.path_depth + 2);
        assert!(paths.gamma_is_convex());
        assert!(paths.eta_is_convex());
    }

    #[test]
    fn convexity_check_catches_a_bad_surrogate() {
        let p = ConstructionParams::new(2);
        let mut paths = build_paths(&p).unwrap();
        // Push the limit point far above the chord: a left turn appears.
        *paths.gamma.last_mut().unwrap() = Vec3::new(rat(33, 20), rat(3, 1), rat(0, 1));
        assert!(!paths.gamma_is_convex());
    }

    #[test]
    fn grid_points() {
        let p = ConstructionParams::new(2);
        let paths = build_paths(&p).unwrap();
        let g = build_grid(&p, &paths);
        for k in 0..p.gamma_length {
            assert_eq!(g.v(0, k), g.w(0, k));
        }
        let expected = &g.w(1, 0).scale(&rat(1, 8)) + &g.w(1, 1).scale(&rat(7, 8));
        assert_eq!(g.v(1, 0), &expected);
        for j in 0..=p.path_depth {
            for k in 0..=p.gamma_length {
                assert_eq!(g.w(j, k), &(g.w(j, 0) + g.w(0, k)));
            }
            for k in 0..p.gamma_length {
                let (a, b, c) = (g.w(j, k), g.v(j, k), g.w(j, k + 1));
                assert!((b - a).cross(&(c - a)).is_zero());
            }
        }
    }

    #[test]
    fn body_vertices_and_offsets() {
        let p = ConstructionParams::new(2);
        let ub = build_body(&p).unwrap();
        ub.body.validate().unwrap();
        assert!(ub.body.has_vertex(&ub.u0));
        assert!(ub.body.has_vertex(&ub.u1));
        for j in 1..=p.m {
            for k in 1..=p.m {
                assert!(is_extreme_point(&ub.body, ub.grid.v(j, k)), "v_{j},{k}");
            }
        }
        assert_eq!(offset_b(&ub, 1), Vec3::from_ints(0, 1, -1));
        assert_eq!(offset_a(2, 2, &rat(1, 100)), Vec3::new(rat(0, 1), rat(0, 1), rat(-1, 100)));
        let fam = build_family(&ub, &rat(1, 100)).unwrap();
        assert_eq!(fam.len(), 6);
        assert_eq!(fam.names(), vec!["A1", "A2", "B1", "B2", "C1", "C2"]);
    }
}

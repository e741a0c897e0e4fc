use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::GeometryError;
use crate::exact_math::{int, lp_feasible, to_decimal, ExactScalar, Feasibility, LinearSystem, Vec3};

/// Facet inequality `normal . p <= offset` together with the body vertices
/// lying on it, in counter-clockwise order seen from outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec3,
    pub offset: ExactScalar,
    pub vertices: Vec<usize>,
}

impl Facet {
    /// `normal . p - offset`; positive means outside.
    pub fn slack(&self, p: &Vec3) -> ExactScalar {
        self.normal.dot(p) - &self.offset
    }
}

/// A compact full-dimensional convex polytope with both descriptions.
///
/// Bodies are immutable; the H-description and the bounding box are
/// computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexBody {
    vertices: Vec<Vec3>,
    facets: Vec<Facet>,
    label: String,
    bbox_min: Vec3,
    bbox_max: Vec3,
}

impl ConvexBody {
    pub(crate) fn from_parts(vertices: Vec<Vec3>, facets: Vec<Facet>, label: String) -> Self {
        let pick = |f: fn(&ExactScalar, &ExactScalar) -> bool| {
            let mut acc = vertices[0].clone();
            for v in &vertices[1..] {
                if f(&v.x, &acc.x) {
                    acc.x = v.x.clone();
                }
                if f(&v.y, &acc.y) {
                    acc.y = v.y.clone();
                }
                if f(&v.z, &acc.z) {
                    acc.z = v.z.clone();
                }
            }
            acc
        };
        let bbox_min = pick(|a, b| a < b);
        let bbox_max = pick(|a, b| a > b);
        Self {
            vertices,
            facets,
            label,
            bbox_min,
            bbox_max,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bounding_box(&self) -> (&Vec3, &Vec3) {
        (&self.bbox_min, &self.bbox_max)
    }

    pub fn has_vertex(&self, p: &Vec3) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    /// Closed containment of `p - offset` in the body.
    pub fn contains(&self, offset: &Vec3, p: &Vec3) -> bool {
        let q = p - offset;
        self.facets.iter().all(|f| f.normal.dot(&q) <= f.offset)
    }

    /// Facets attained with equality at `p`.
    pub fn facets_through(&self, p: &Vec3) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].slack(p).is_zero())
            .collect()
    }

    /// Checks the structural invariants: vertices satisfy all facets, every
    /// facet is supported by at least three of its listed vertices, and no
    /// vertex is a convex combination of the others.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let bad = |msg: String| Err(GeometryError::Invalid(msg));
        for (i, v) in self.vertices.iter().enumerate() {
            if let Some(f) = self.facets.iter().position(|f| f.slack(v).is_positive()) {
                return bad(format!("vertex {i} violates facet {f}"));
            }
        }
        for (fi, f) in self.facets.iter().enumerate() {
            if f.vertices.len() < 3 {
                return bad(format!("facet {fi} has {} vertices", f.vertices.len()));
            }
            if f.vertices.iter().any(|&v| !f.slack(&self.vertices[v]).is_zero()) {
                return bad(format!("facet {fi} lists a vertex off its plane"));
            }
            let a = &self.vertices[f.vertices[0]];
            let independent = f.vertices.iter().any(|&j| {
                f.vertices.iter().any(|&k| {
                    !(&self.vertices[j] - a).cross(&(&self.vertices[k] - a)).is_zero()
                })
            });
            if !independent {
                return bad(format!("facet {fi} vertices are collinear"));
            }
        }
        for v in &self.vertices {
            if !is_extreme_point(self, v) {
                return bad(format!("vertex {v} is not extreme"));
            }
        }
        Ok(())
    }

    /// Wavefront OBJ text: one `v` line per vertex (translated by `offset`,
    /// rendered with `digits` decimals) and a triangle fan per facet.
    pub fn to_obj(&self, offset: &Vec3, digits: usize) -> String {
        let mut out = String::new();
        if !self.label.is_empty() {
            out.push_str(&format!("o {}\n", self.label));
        }
        for v in &self.vertices {
            let p = v + offset;
            out.push_str(&format!(
                "v {} {} {}\n",
                to_decimal(&p.x, digits),
                to_decimal(&p.y, digits),
                to_decimal(&p.z, digits)
            ));
        }
        for f in &self.facets {
            for w in 1..f.vertices.len() - 1 {
                out.push_str(&format!(
                    "f {} {} {}\n",
                    f.vertices[0] + 1,
                    f.vertices[w] + 1,
                    f.vertices[w + 1] + 1
                ));
            }
        }
        out
    }
}

/// Closed membership test of `p` in `body + offset`.
pub fn point_in_body(body: &ConvexBody, offset: &Vec3, p: &Vec3) -> bool {
    body.contains(offset, p)
}

fn point_row(p: &Vec3) -> Vec<ExactScalar> {
    vec![p.x.clone(), p.y.clone(), p.z.clone(), -BigRational::one()]
}

/// True iff `p` is not a convex combination of the body's other vertices.
///
/// Decided by looking for a plane `a . x = c` with `a . p >= c` and
/// `a . q <= c - 1` for every other vertex `q`.
pub fn is_extreme_point(body: &ConvexBody, p: &Vec3) -> bool {
    extreme_against(body.vertices().iter().filter(|q| *q != p), p)
}

/// `p` is extreme with respect to `others` when it is strictly separable from them.
pub(crate) fn extreme_against<'a>(others: impl Iterator<Item = &'a Vec3>, p: &Vec3) -> bool {
    let mut sys = LinearSystem::new(4);
    for q in others {
        sys.add_le(point_row(q), int(-1));
    }
    sys.add_ge(point_row(p), BigRational::zero());
    lp_feasible(&sys)
        .expect("well-formed 4-variable system")
        .is_feasible()
}

/// The plane `normal . x = offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: ExactScalar,
}

impl Plane {
    pub fn side(&self, p: &Vec3) -> ExactScalar {
        self.normal.dot(p) - &self.offset
    }
}

/// A plane with every point of `first` strictly on its negative side and
/// every point of `second` strictly on its positive side, if one exists.
pub fn separate_points(first: &[Vec3], second: &[Vec3]) -> Option<Plane> {
    let mut sys = LinearSystem::new(4);
    for p in first {
        sys.add_le(point_row(p), int(-1));
    }
    for q in second {
        sys.add_ge(point_row(q), int(1));
    }
    match lp_feasible(&sys).expect("well-formed 4-variable system") {
        Feasibility::Feasible(x) => {
            let plane = Plane {
                normal: Vec3::new(x[0].clone(), x[1].clone(), x[2].clone()),
                offset: x[3].clone(),
            };
            debug_assert!(first.iter().all(|p| plane.side(p).is_negative()));
            debug_assert!(second.iter().all(|q| plane.side(q).is_positive()));
            Some(plane)
        }
        Feasibility::Infeasible(_) => None,
    }
}

/// Strictly separating plane between two bodies; `None` when they meet.
pub fn separate(first: &ConvexBody, second: &ConvexBody) -> Option<Plane> {
    separate_points(first.vertices(), second.vertices())
}

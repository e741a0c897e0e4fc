use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::body::ConvexBody;
use super::GeometryError;
use crate::exact_math::{lp_feasible, ExactScalar, Feasibility, LinearSystem, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    A,
    B,
    C,
    Generic,
}

impl Role {
    fn prefix(self) -> &'static str {
        match self {
            Role::A => "A",
            Role::B => "B",
            Role::C => "C",
            Role::Generic => "X",
        }
    }
}

/// `body + offset`, tagged with its role in a family.
#[derive(Clone, Debug)]
pub struct Translate {
    body: Arc<ConvexBody>,
    offset: Vec3,
    role: Role,
    index: usize,
    /// `facet.offset + facet.normal . offset`, per facet of `body`.
    shifted_offsets: Vec<ExactScalar>,
}

impl Translate {
    pub fn new(body: Arc<ConvexBody>, offset: Vec3, role: Role, index: usize) -> Self {
        let shifted_offsets = body
            .facets()
            .iter()
            .map(|f| &f.offset + f.normal.dot(&offset))
            .collect();
        Self {
            body,
            offset,
            role,
            index,
            shifted_offsets,
        }
    }

    pub fn body(&self) -> &Arc<ConvexBody> {
        &self.body
    }

    pub fn offset(&self) -> &Vec3 {
        &self.offset
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.role.prefix(), self.index)
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        self.body
            .facets()
            .iter()
            .zip(&self.shifted_offsets)
            .all(|(f, off)| f.normal.dot(p) <= *off)
    }

    /// Translated bounding box.
    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let (lo, hi) = self.body.bounding_box();
        (lo + &self.offset, hi + &self.offset)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.body.vertices().iter().map(|v| v + &self.offset)
    }
}

impl fmt::Display for Translate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} + {}", self.name(), self.body.label(), self.offset)
    }
}

/// An ordered family of translates; the order is the nerve's vertex order.
#[derive(Clone, Debug)]
pub struct TranslateFamily {
    translates: Vec<Translate>,
}

impl TranslateFamily {
    pub fn new(translates: Vec<Translate>) -> Result<Self, GeometryError> {
        let mut seen = HashSet::new();
        for t in &translates {
            if !seen.insert((t.role, t.index)) {
                return Err(GeometryError::Invalid(format!("duplicate translate {}", t.name())));
            }
        }
        Ok(Self { translates })
    }

    pub fn translates(&self) -> &[Translate] {
        &self.translates
    }

    pub fn len(&self) -> usize {
        self.translates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translates.is_empty()
    }

    pub fn get(&self, i: usize) -> &Translate {
        &self.translates[i]
    }

    /// The translate with this role and index.
    pub fn find(&self, role: Role, index: usize) -> Option<&Translate> {
        self.translates.iter().find(|t| t.role == role && t.index == index)
    }

    pub fn names(&self) -> Vec<String> {
        self.translates.iter().map(Translate::name).collect()
    }

    /// Distinct base bodies, in order of first use.
    pub fn bodies(&self) -> Vec<Arc<ConvexBody>> {
        let mut out: Vec<Arc<ConvexBody>> = Vec::new();
        for t in &self.translates {
            if !out.iter().any(|b| Arc::ptr_eq(b, &t.body)) {
                out.push(Arc::clone(&t.body));
            }
        }
        out
    }

    pub fn bounding_box(&self) -> Option<(Vec3, Vec3)> {
        let mut boxes = self.translates.iter().map(Translate::bounding_box);
        let (mut lo, mut hi) = boxes.next()?;
        for (l, h) in boxes {
            lo = Vec3::new(
                lo.x.min(l.x),
                lo.y.min(l.y),
                lo.z.min(l.z),
            );
            hi = Vec3::new(
                hi.x.max(h.x),
                hi.y.max(h.y),
                hi.z.max(h.z),
            );
        }
        Some((lo, hi))
    }
}

/// Outcome of an intersection test on a set of translates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    /// A point in the common (closed) intersection.
    Point(Vec3),
    Empty,
}

impl Intersection {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, Intersection::Point(_))
    }
}

/// Common bounding box of the translates, or `None` when the boxes miss.
fn common_box(translates: &[&Translate]) -> Option<(Vec3, Vec3)> {
    let boxes: Vec<(Vec3, Vec3)> = translates.iter().map(|t| t.bounding_box()).collect();
    let mut lo = Vec::with_capacity(3);
    let mut hi = Vec::with_capacity(3);
    for axis in 0..3 {
        let l = boxes.iter().map(|(l, _)| l.coords()[axis]).max().expect("nonempty");
        let h = boxes.iter().map(|(_, h)| h.coords()[axis]).min().expect("nonempty");
        if l > h {
            return None;
        }
        lo.push(l.clone());
        hi.push(h.clone());
    }
    Some((
        Vec3::new(lo[0].clone(), lo[1].clone(), lo[2].clone()),
        Vec3::new(hi[0].clone(), hi[1].clone(), hi[2].clone()),
    ))
}

/// Largest value of `n . p` over the box `[lo, hi]`.
fn box_support(n: &Vec3, lo: &Vec3, hi: &Vec3) -> ExactScalar {
    let pick = |c: &ExactScalar, l: &ExactScalar, h: &ExactScalar| {
        if c.is_positive() {
            c * h
        } else {
            c * l
        }
    };
    pick(&n.x, &lo.x, &hi.x) + pick(&n.y, &lo.y, &hi.y) + pick(&n.z, &lo.z, &hi.z)
}

/// Facets added to the active set per round of constraint generation.
const ROUND_SIZE: usize = 6;

/// Decides whether the translates share a point, returning one if so.
///
/// The common intersection lies in the intersection of the bounding boxes,
/// so the system is that box plus every shifted facet inequality that the
/// box does not already satisfy; facets with identical normals keep only
/// the tightest offset. The LP is solved by constraint generation: start
/// from the box, solve, and add the facets the witness violates most until
/// a witness satisfies everything. An infeasible subsystem already proves
/// the whole system infeasible, so both answers are exact.
pub fn bodies_intersect(translates: &[&Translate]) -> Result<Intersection, GeometryError> {
    if translates.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let Some((lo, hi)) = common_box(translates) else {
        return Ok(Intersection::Empty);
    };
    let mut tightest: HashMap<&Vec3, &ExactScalar> = HashMap::new();
    let mut order: Vec<&Vec3> = Vec::new();
    for t in translates {
        for (f, off) in t.body.facets().iter().zip(&t.shifted_offsets) {
            if box_support(&f.normal, &lo, &hi) <= *off {
                continue;
            }
            match tightest.get_mut(&f.normal) {
                Some(cur) => {
                    if off < *cur {
                        *cur = off;
                    }
                }
                None => {
                    tightest.insert(&f.normal, off);
                    order.push(&f.normal);
                }
            }
        }
    }
    let mut base = LinearSystem::new(3);
    for (axis, (l, h)) in lo.coords().into_iter().zip(hi.coords()).enumerate() {
        let mut row = vec![ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero()];
        row[axis] = ExactScalar::one();
        base.add_le(row.clone(), h.clone());
        base.add_ge(row, l.clone());
    }
    let mut active = vec![false; order.len()];
    let mut sys = base;
    loop {
        let p = match lp_feasible(&sys)? {
            Feasibility::Feasible(x) => Vec3::new(x[0].clone(), x[1].clone(), x[2].clone()),
            Feasibility::Infeasible(_) => return Ok(Intersection::Empty),
        };
        let mut violated: Vec<(ExactScalar, usize)> = order
            .iter()
            .enumerate()
            .filter(|&(i, _)| !active[i])
            .filter_map(|(i, n)| {
                let excess = n.dot(&p) - tightest[n];
                excess.is_positive().then(|| (excess / n.l1_norm(), i))
            })
            .collect();
        if violated.is_empty() {
            debug_assert!(translates.iter().all(|t| t.contains(&p)));
            return Ok(Intersection::Point(p));
        }
        violated.sort_by(|a, b| b.cmp(a));
        for &(_, i) in violated.iter().take(ROUND_SIZE) {
            active[i] = true;
            let n = order[i];
            sys.add_le(vec![n.x.clone(), n.y.clone(), n.z.clone()], tightest[n].clone());
        }
    }
}

/// Minimum over facets of the body of `(normal . p - offset) / |normal|_1`
/// maximised: a certified lower bound on the Euclidean distance from `p`
/// to the translate, zero when `p` is inside.
pub fn distance_lower_bound(t: &Translate, p: &Vec3) -> ExactScalar {
    t.body
        .facets()
        .iter()
        .zip(&t.shifted_offsets)
        .map(|(f, off)| (f.normal.dot(p) - off) / f.normal.l1_norm())
        .max()
        .map(|m| if m > ExactScalar::zero() { m } else { ExactScalar::zero() })
        .unwrap_or_else(ExactScalar::zero)
}

use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::exact_math::{format_rational, int, rat, ExactScalar, Vec3};
use crate::geometry::{convex_hull, ConvexBody, Role, Translate, TranslateFamily};

/// The seven points `a..g` whose hull is the warm-up body.
pub fn warmup_points() -> [(char, Vec3); 7] {
    [
        ('a', Vec3::from_ints(0, 0, 0)),
        ('b', Vec3::from_ints(1, 0, 0)),
        ('c', Vec3::from_ints(0, 0, -1)),
        ('d', Vec3::from_ints(1, 0, -1)),
        ('e', Vec3::new(rat(1, 2), rat(1, 2), rat(1, 2))),
        ('f', Vec3::from_ints(0, 1, 0)),
        ('g', Vec3::from_ints(1, 1, 0)),
    ]
}

fn point(name: char) -> Vec3 {
    warmup_points()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
        .expect("known warm-up point")
}

pub fn build_warmup_body() -> ConvexBody {
    let pts: Vec<Vec3> = warmup_points().into_iter().map(|(_, p)| p).collect();
    convex_hull(&pts)
        .expect("the seven warm-up points span space")
        .with_label("warmup")
}

/// Placement of the `2m + 1` warm-up translates.
///
/// `B_j` puts the apex `e` at `x = (2j-1)/(2m)` on the edge `ab`. Below `ab`,
/// consecutive `B`s overlap in the plane `y = 0` down to depth `ell`, measured
/// at the midpoint between their apices. `A_i` puts `f` at `(0, 0, -(i-1) ell/m)`
/// on the segment from `a` to `c' = (0, 0, -ell)`, so that `A_i` meets the
/// plane `y = 0` in a horizontal line. `C` is the body itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarmupSpec {
    pub m: usize,
    pub ell: ExactScalar,
    pub c_prime: Vec3,
    /// Where `e` lands for `B_1..B_m`.
    pub b_apices: Vec<Vec3>,
    /// Where `f` lands for `A_1..A_m`.
    pub a_anchors: Vec<Vec3>,
    /// `(j/m, 0, -ell)`: the deepest common point of `B_j` and `B_(j+1)`
    /// in the plane `y = 0` straight below the midpoint of their apices.
    pub b_contacts: Vec<Vec3>,
}

impl WarmupSpec {
    pub fn to_record(&self) -> WarmupRecord {
        WarmupRecord {
            m: self.m,
            ell: format_rational(&self.ell),
            c_prime: self.c_prime.to_string(),
            b_apices: self.b_apices.iter().map(Vec3::to_string).collect(),
            a_anchors: self.a_anchors.iter().map(Vec3::to_string).collect(),
            rule: "e at x = (2j-1)/(2m) on ab; f at z = -(i-1)*ell/m on ac'".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarmupRecord {
    pub m: usize,
    pub ell: String,
    pub c_prime: String,
    pub b_apices: Vec<String>,
    pub a_anchors: Vec<String>,
    pub rule: String,
}

/// Highest `z` with `(x, y, z)` in `body + offset`, if the vertical line meets it.
fn top_on_vertical(body: &ConvexBody, offset: &Vec3, x: &ExactScalar, y: &ExactScalar) -> Option<ExactScalar> {
    let mut hi: Option<ExactScalar> = None;
    let mut lo: Option<ExactScalar> = None;
    for f in body.facets() {
        // n . (p - offset) <= off  with p = (x, y, z)
        let rest = &f.offset - &f.normal.x * (x - &offset.x) - &f.normal.y * (y - &offset.y)
            + &f.normal.z * &offset.z;
        if f.normal.z.is_positive() {
            let bound = rest / &f.normal.z;
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        } else if f.normal.z.is_negative() {
            let bound = rest / &f.normal.z;
            lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
        } else if rest.is_negative() {
            return None;
        }
    }
    match (hi, lo) {
        (Some(h), Some(l)) if l <= h => Some(h),
        _ => None,
    }
}

pub fn warmup_spec(m: usize, body: &ConvexBody) -> Result<WarmupSpec, ConstructionError> {
    if m < 2 {
        return Err(ConstructionError::InvalidParams("the warm-up needs m >= 2".into()));
    }
    let e = point('e');
    let f = point('f');
    let mm = m as i64;
    let b_apices: Vec<Vec3> = (1..=mm)
        .map(|j| Vec3::new(rat(2 * j - 1, 2 * mm), int(0), int(0)))
        .collect();
    // Depth below ab where B_1 and B_2 cross, straight below the midpoint.
    let offset_b1 = &b_apices[0] - &e;
    let mid = rat(1, mm);
    let top = top_on_vertical(body, &offset_b1, &mid, &int(0)).ok_or_else(|| {
        ConstructionError::Certificate("B_1 does not reach the midpoint between apices".into())
    })?;
    let ell = -top;
    if !ell.is_positive() {
        return Err(ConstructionError::Certificate("consecutive B translates do not overlap below ab".into()));
    }
    let c_prime = Vec3::new(int(0), int(0), -ell.clone());
    let a_anchors: Vec<Vec3> = (1..=mm)
        .map(|i| Vec3::new(int(0), int(0), -(&ell * rat(i - 1, mm))))
        .collect();
    let b_contacts: Vec<Vec3> = (1..mm)
        .map(|j| Vec3::new(rat(j, mm), int(0), -ell.clone()))
        .collect();
    debug_assert!(a_anchors.iter().all(|p| p != &f));
    Ok(WarmupSpec {
        m,
        ell,
        c_prime,
        b_apices,
        a_anchors,
        b_contacts,
    })
}

/// `A_1..A_m, B_1..B_m, C_1` with `C_1` the body itself.
pub fn build_warmup_family(m: usize) -> Result<(WarmupSpec, TranslateFamily), ConstructionError> {
    let body = Arc::new(build_warmup_body());
    let spec = warmup_spec(m, &body)?;
    let e = point('e');
    let f = point('f');
    let mut translates = Vec::with_capacity(2 * m + 1);
    for (i, anchor) in spec.a_anchors.iter().enumerate() {
        translates.push(Translate::new(body.clone(), anchor - &f, Role::A, i + 1));
    }
    for (j, apex) in spec.b_apices.iter().enumerate() {
        translates.push(Translate::new(body.clone(), apex - &e, Role::B, j + 1));
    }
    translates.push(Translate::new(body, Vec3::zero(), Role::C, 1));
    Ok((spec, TranslateFamily::new(translates)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_extreme_point;

    #[test]
    fn body_has_seven_vertices_and_the_square_facet() {
        let k = build_warmup_body();
        assert_eq!(k.vertices().len(), 7);
        k.validate().unwrap();
        for (_, p) in warmup_points() {
            assert!(is_extreme_point(&k, &p));
        }
        let square: Vec<_> = k
            .facets()
            .iter()
            .filter(|f| f.normal.x == int(0) && f.normal.z == int(0) && f.normal.y.is_negative())
            .collect();
        assert_eq!(square.len(), 1);
        assert_eq!(square[0].vertices.len(), 4);
        for name in ['a', 'b', 'c', 'd'] {
            assert!(square[0].slack(&point(name)) == int(0));
        }
        assert!(k.contains(&Vec3::zero(), &point('e')));
    }

    #[test]
    fn family_layout() {
        let (spec, fam) = build_warmup_family(2).unwrap();
        assert_eq!(fam.len(), 5);
        assert_eq!(spec.ell, rat(1, 4));
        for (j, p) in spec.b_contacts.iter().enumerate() {
            assert!(fam.find(Role::B, j + 1).unwrap().contains(p));
            assert!(fam.find(Role::B, j + 2).unwrap().contains(p));
        }
        assert!(build_warmup_family(1).is_err());
    }
}

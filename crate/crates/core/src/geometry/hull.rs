//! Incremental 3D convex hull over exact integers.
//!
//! Input points are scaled by the common denominator so every orientation
//! test is a `BigInt` determinant. Triangles are grown incrementally (a point
//! is inserted only if it sees some face strictly), then coplanar triangles
//! are merged into polygonal facets and non-extreme vertices are dropped.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::body::{ConvexBody, Facet};
use super::GeometryError;
use crate::exact_math::{common_denominator, Vec3};

type IPoint = [BigInt; 3];

fn sub(a: &IPoint, b: &IPoint) -> IPoint {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &IPoint, b: &IPoint) -> IPoint {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &IPoint, b: &IPoint) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn is_zero(a: &IPoint) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Sign of the volume of `(b - a, c - a, d - a)`.
fn orient(a: &IPoint, b: &IPoint, c: &IPoint, d: &IPoint) -> BigInt {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

/// Affine dimension of a point set (-1 for the empty set).
pub fn affine_dimension(points: &[Vec3]) -> i32 {
    let (ipts, _) = scale_to_integers(points);
    match initial_simplex(&ipts) {
        Ok(_) => 3,
        Err(dim) => dim,
    }
}

fn scale_to_integers(points: &[Vec3]) -> (Vec<IPoint>, BigInt) {
    let scale = common_denominator(points.iter().flat_map(|p| p.coords()));
    let ipts = points
        .iter()
        .map(|p| {
            let s = BigRational::from_integer(scale.clone());
            [
                (&p.x * &s).to_integer(),
                (&p.y * &s).to_integer(),
                (&p.z * &s).to_integer(),
            ]
        })
        .collect();
    (ipts, scale)
}

/// Indices of four affinely independent points, or the affine dimension.
fn initial_simplex(pts: &[IPoint]) -> Result<[usize; 4], i32> {
    if pts.is_empty() {
        return Err(-1);
    }
    let i1 = (1..pts.len()).find(|&i| pts[i] != pts[0]).ok_or(0)?;
    let d1 = sub(&pts[i1], &pts[0]);
    let i2 = (1..pts.len())
        .find(|&i| !is_zero(&cross(&d1, &sub(&pts[i], &pts[0]))))
        .ok_or(1)?;
    let i3 = (1..pts.len())
        .find(|&i| !orient(&pts[0], &pts[i1], &pts[i2], &pts[i]).is_zero())
        .ok_or(2)?;
    Ok([0, i1, i2, i3])
}

/// Builds the convex hull of `points` with both descriptions.
pub fn convex_hull(points: &[Vec3]) -> Result<ConvexBody, GeometryError> {
    let mut pts: Vec<Vec3> = points.to_vec();
    pts.sort();
    pts.dedup();
    let (ipts, scale) = scale_to_integers(&pts);
    let simplex = initial_simplex(&ipts).map_err(|affine_dim| GeometryError::Degenerate { affine_dim })?;

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let [a, b, c, d] = simplex;
    // Orient every face so the remaining simplex vertex is strictly below it.
    for (f, opposite) in [([a, b, c], d), ([a, b, d], c), ([a, c, d], b), ([b, c, d], a)] {
        let face = if orient(&ipts[f[0]], &ipts[f[1]], &ipts[f[2]], &ipts[opposite]).is_positive() {
            [f[0], f[2], f[1]]
        } else {
            f
        };
        faces.push(face);
        alive.push(true);
    }

    let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
    for p in (0..ipts.len()).filter(|i| !in_simplex.contains(i)) {
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| {
                alive[f] && {
                    let [i, j, k] = faces[f];
                    orient(&ipts[i], &ipts[j], &ipts[k], &ipts[p]).is_positive()
                }
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let edges: HashSet<(usize, usize)> = visible
            .iter()
            .flat_map(|&f| {
                let [i, j, k] = faces[f];
                [(i, j), (j, k), (k, i)]
            })
            .collect();
        let mut horizon: Vec<(usize, usize)> = edges
            .iter()
            .filter(|(i, j)| !edges.contains(&(*j, *i)))
            .copied()
            .collect();
        horizon.sort();
        for &f in &visible {
            alive[f] = false;
        }
        for (i, j) in horizon {
            faces.push([i, j, p]);
            alive.push(true);
        }
    }

    // Merge coplanar triangles: plane key = (primitive normal, offset).
    let mut planes: BTreeMap<(Vec<BigInt>, BigInt), BTreeSet<usize>> = BTreeMap::new();
    for (f, face) in faces.iter().enumerate() {
        if !alive[f] {
            continue;
        }
        let [i, j, k] = *face;
        let n = cross(&sub(&ipts[j], &ipts[i]), &sub(&ipts[k], &ipts[i]));
        let g = n.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let n: IPoint = [&n[0] / &g, &n[1] / &g, &n[2] / &g];
        let off = dot(&n, &ipts[i]);
        planes
            .entry((n.to_vec(), off))
            .or_default()
            .extend([i, j, k]);
    }
    let plane_list: Vec<(IPoint, BigInt)> = planes
        .keys()
        .map(|(n, off)| ([n[0].clone(), n[1].clone(), n[2].clone()], off.clone()))
        .collect();

    let candidates: BTreeSet<usize> = planes.values().flatten().copied().collect();
    let extreme: Vec<usize> = candidates
        .into_iter()
        .filter(|&v| {
            let normals: Vec<&IPoint> = plane_list
                .iter()
                .filter(|(n, off)| dot(n, &ipts[v]) == *off)
                .map(|(n, _)| n)
                .collect();
            spans_space(&normals)
        })
        .collect();

    let vertices: Vec<Vec3> = extreme.iter().map(|&i| pts[i].clone()).collect();
    let scale_q = BigRational::from_integer(scale);
    let mut facets = Vec::with_capacity(plane_list.len());
    for (n, off) in &plane_list {
        let on: Vec<usize> = extreme
            .iter()
            .enumerate()
            .filter(|(_, &i)| dot(n, &ipts[i]) == *off)
            .map(|(pos, _)| pos)
            .collect();
        debug_assert!(on.len() >= 3, "facet with fewer than three extreme vertices");
        let normal = Vec3::new(
            BigRational::from_integer(n[0].clone()),
            BigRational::from_integer(n[1].clone()),
            BigRational::from_integer(n[2].clone()),
        );
        let offset = BigRational::from_integer(off.clone()) / &scale_q;
        let cyclic = cyclic_order(&vertices, &normal, on);
        facets.push(Facet {
            normal,
            offset,
            vertices: cyclic,
        });
    }
    Ok(ConvexBody::from_parts(vertices, facets, String::new()))
}

fn spans_space(normals: &[&IPoint]) -> bool {
    for (i, a) in normals.iter().enumerate() {
        for (j, b) in normals.iter().enumerate().skip(i + 1) {
            let ab = cross(a, b);
            if is_zero(&ab) {
                continue;
            }
            if normals.iter().skip(j + 1).any(|c| !dot(&ab, c).is_zero()) {
                return true;
            }
        }
    }
    false
}

/// Counter-clockwise order of a convex facet polygon seen from outside.
fn cyclic_order(vertices: &[Vec3], normal: &Vec3, mut on: Vec<usize>) -> Vec<usize> {
    on.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
    let anchor = on[0];
    let mut rest: Vec<usize> = on[1..].to_vec();
    rest.sort_by(|&a, &b| {
        let da = &vertices[a] - &vertices[anchor];
        let db = &vertices[b] - &vertices[anchor];
        let turn = da.cross(&db).dot(normal);
        // Positive turn means a comes first.
        BigRational::zero().cmp(&turn)
    });
    let mut out = vec![anchor];
    out.extend(rest);
    out
}

use std::sync::Arc;

use holecount::construction::{build_warmup_body, warmup_points};
use holecount::exact_math::{int, rat, Vec3};
use holecount::geometry::{
    affine_dimension, bodies_intersect, convex_hull, is_extreme_point, point_in_body, separate, ConvexBody,
    GeometryError, Intersection, Role, Translate,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_cube() -> ConvexBody {
    let mut pts = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                pts.push(Vec3::from_ints(x, y, z));
            }
        }
    }
    convex_hull(&pts).unwrap()
}

fn translate(body: &Arc<ConvexBody>, offset: Vec3, index: usize) -> Translate {
    Translate::new(Arc::clone(body), offset, Role::Generic, index)
}

fn random_points(rng: &mut ChaCha8Rng, count: usize, offset: &Vec3) -> Vec<Vec3> {
    (0..count)
        .map(|_| {
            let mut c = || rat(rng.gen_range(0..=12), 2);
            let p = Vec3::new(c(), c(), c());
            &p + offset
        })
        .collect()
}

fn random_hull(rng: &mut ChaCha8Rng, offset: &Vec3) -> ConvexBody {
    loop {
        if let Ok(body) = convex_hull(&random_points(rng, 8, offset)) {
            return body;
        }
    }
}

#[test]
fn interior_point_is_dropped_from_cube_hull() {
    let mut pts = unit_cube().vertices().to_vec();
    pts.push(Vec3::new(rat(1, 2), rat(1, 2), rat(1, 2)));
    let hull = convex_hull(&pts).unwrap();
    assert_eq!(hull.vertices().len(), 8);
    assert_eq!(hull.facets().len(), 6);
    hull.validate().unwrap();
}

#[test]
fn tetrahedron_has_four_facets() {
    let pts = [Vec3::from_ints(0, 0, 0), Vec3::from_ints(1, 0, 0), Vec3::from_ints(0, 1, 0), Vec3::from_ints(0, 0, 1)];
    let hull = convex_hull(&pts).unwrap();
    assert_eq!((hull.vertices().len(), hull.facets().len()), (4, 4));
}

#[test]
fn planar_input_reports_its_dimension() {
    let square = [Vec3::from_ints(0, 0, 0), Vec3::from_ints(1, 0, 0), Vec3::from_ints(0, 1, 0), Vec3::from_ints(1, 1, 0)];
    assert_eq!(affine_dimension(&square), 2);
    assert_eq!(convex_hull(&square).unwrap_err(), GeometryError::Degenerate { affine_dim: 2 });
    assert_eq!(affine_dimension(&square[..1]), 0);
}

#[test]
fn warmup_body_has_facet_abcd_in_plane_y_zero() {
    let body = build_warmup_body();
    assert_eq!(body.vertices().len(), 7);
    let names: Vec<(char, Vec3)> = warmup_points().to_vec();
    let on_plane: Vec<Vec<char>> = body
        .facets()
        .iter()
        .filter(|f| f.normal.x == int(0) && f.normal.z == int(0) && f.offset == int(0))
        .map(|f| {
            let mut labels: Vec<char> = f
                .vertices
                .iter()
                .map(|&i| names.iter().find(|(_, p)| *p == body.vertices()[i]).unwrap().0)
                .collect();
            labels.sort_unstable();
            labels
        })
        .collect();
    assert_eq!(on_plane, vec![vec!['a', 'b', 'c', 'd']]);
    for (_, p) in &names {
        assert!(is_extreme_point(&body, p));
    }
}

#[test]
fn closed_membership() {
    let cube = unit_cube();
    let zero = Vec3::zero();
    assert!(point_in_body(&cube, &zero, &Vec3::new(rat(1, 2), rat(1, 2), rat(1, 2))));
    assert!(point_in_body(&cube, &zero, &Vec3::from_ints(1, 1, 1)));
    assert!(!point_in_body(&cube, &zero, &Vec3::new(rat(1, 2), rat(1, 2), rat(101, 100))));
    assert!(point_in_body(&cube, &Vec3::from_ints(5, 0, 0), &Vec3::from_ints(6, 1, 1)));
    let warm = build_warmup_body();
    assert!(point_in_body(&warm, &zero, &Vec3::new(rat(1, 2), rat(1, 2), rat(1, 2))));
}

#[test]
fn every_vertex_is_inside_its_body() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let body = random_hull(&mut rng, &Vec3::zero());
        body.validate().unwrap();
        for v in body.vertices() {
            assert!(point_in_body(&body, &Vec3::zero(), v));
        }
    }
}

#[test]
fn extreme_point_examples() {
    let cube = unit_cube();
    assert!(is_extreme_point(&cube, &Vec3::from_ints(1, 0, 1)));
    assert!(!is_extreme_point(&cube, &Vec3::new(rat(1, 2), rat(1, 2), int(0))));
}

#[test]
fn touching_cubes_intersect_and_apart_cubes_do_not() {
    let cube = Arc::new(unit_cube());
    let at = |x: i64, i| translate(&cube, Vec3::from_ints(x, 0, 0), i);
    let (origin, shifted, far) = (at(0, 0), at(1, 1), at(3, 2));
    match bodies_intersect(&[&origin, &shifted]).unwrap() {
        Intersection::Point(p) => {
            assert_eq!(p.x, int(1));
            assert!(origin.contains(&p) && shifted.contains(&p));
        }
        Intersection::Empty => panic!("touching cubes must meet"),
    }
    assert_eq!(bodies_intersect(&[&origin, &far]).unwrap(), Intersection::Empty);
    assert_eq!(bodies_intersect(&[]).unwrap_err(), GeometryError::EmptyInput);
}

#[test]
fn separation_examples() {
    let cube = unit_cube();
    let moved = convex_hull(&cube.vertices().iter().map(|v| v + &Vec3::from_ints(3, 0, 0)).collect::<Vec<_>>()).unwrap();
    let plane = separate(&cube, &moved).expect("disjoint cubes separate");
    assert!(cube.vertices().iter().all(|v| plane.side(v) < int(0)));
    assert!(moved.vertices().iter().all(|v| plane.side(v) > int(0)));
    let overlapping = convex_hull(&cube.vertices().iter().map(|v| v + &Vec3::new(rat(1, 2), int(0), int(0))).collect::<Vec<_>>()).unwrap();
    assert!(separate(&cube, &overlapping).is_none());
}

#[test]
fn hull_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let points = random_points(&mut rng, 12, &Vec3::zero());
        let Ok(first) = convex_hull(&points) else { continue };
        let second = convex_hull(first.vertices()).unwrap();
        let mut a = first.vertices().to_vec();
        let mut b = second.vertices().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(first.facets().len(), second.facets().len());
    }
}

#[test]
fn intersection_agrees_with_separation_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut meeting = 0;
    for _ in 0..50 {
        let first = Arc::new(random_hull(&mut rng, &Vec3::zero()));
        let shift = Vec3::new(rat(rng.gen_range(0..=16), 2), rat(rng.gen_range(0..=16), 2), rat(rng.gen_range(0..=4), 2));
        let second = Arc::new(random_hull(&mut rng, &shift));
        let (a, b) = (translate(&first, Vec3::zero(), 0), translate(&second, Vec3::zero(), 1));
        let result = bodies_intersect(&[&a, &b]).unwrap();
        if let Intersection::Point(p) = &result {
            assert!(a.contains(p) && b.contains(p));
            meeting += 1;
        }
        assert_eq!(result.is_nonempty(), separate(&first, &second).is_none());
    }
    // Both outcomes occur, so the comparison is not vacuous.
    assert!(meeting > 0 && meeting < 50, "{meeting} of 50 pairs meet");
}

#[test]
fn intersection_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let members: Vec<Translate> = (0..4)
            .map(|i| {
                let shift = Vec3::new(rat(rng.gen_range(0..=6), 2), rat(rng.gen_range(0..=6), 2), int(0));
                translate(&Arc::new(random_hull(&mut rng, &shift)), Vec3::zero(), i)
            })
            .collect();
        let all: Vec<&Translate> = members.iter().collect();
        if let Intersection::Point(p) = bodies_intersect(&all).unwrap() {
            for skip in 0..4 {
                let subset: Vec<&Translate> = all.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, t)| *t).collect();
                assert!(bodies_intersect(&subset).unwrap().is_nonempty());
                assert!(subset.iter().all(|t| t.contains(&p)));
            }
        }
    }
}

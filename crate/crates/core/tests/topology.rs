use std::sync::{Arc, OnceLock};

use holecount::construction::{build_body, choose_epsilon, ConstructionParams, ValidatedFamily};
use holecount::exact_math::{int, rat, Vec3};
use holecount::geometry::{convex_hull, ConvexBody, Role, Translate, TranslateFamily};
use holecount::topology::{
    betti, boundary_matrix, hole_count, nerve_skeleton, upper_bound_holds, verify_nerve_matches, SimplicialComplex,
    TopologyError,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn tetrahedron_surface() -> SimplicialComplex {
    SimplicialComplex::from_maximal(names(4), &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]], None)
}

fn unit_cube() -> Arc<ConvexBody> {
    let pts: Vec<Vec3> = (0..8).map(|b| Vec3::from_ints(b & 1, (b >> 1) & 1, (b >> 2) & 1)).collect();
    Arc::new(convex_hull(&pts).unwrap())
}

fn generic_family(body: &Arc<ConvexBody>, offsets: &[Vec3]) -> TranslateFamily {
    TranslateFamily::new(
        offsets
            .iter()
            .enumerate()
            .map(|(i, o)| Translate::new(Arc::clone(body), o.clone(), Role::Generic, i + 1))
            .collect(),
    )
    .unwrap()
}

/// The validated m=2 family, built once for all tests in this file.
fn validated_two() -> &'static ValidatedFamily {
    static CELL: OnceLock<ValidatedFamily> = OnceLock::new();
    CELL.get_or_init(|| {
        let body = build_body(&ConstructionParams::new(2)).unwrap();
        choose_epsilon(&body).unwrap().1
    })
}

fn assert_boundaries_compose_to_zero(complex: &SimplicialComplex) {
    for i in 1..complex.dimension() {
        let lower = boundary_matrix(complex, i).unwrap();
        let upper = boundary_matrix(complex, i + 1).unwrap();
        assert!(lower.multiply(&upper).is_zero(), "∂{i}∂{} is not zero", i + 1);
    }
}

#[test]
fn triangle_boundary_column() {
    let tri = SimplicialComplex::from_maximal(names(3), &[vec![0, 1, 2]], None);
    let d2 = boundary_matrix(&tri, 2).unwrap();
    // Rows: edges 01, 02, 12.
    assert_eq!(d2.to_dense(), vec![vec![int(1)], vec![int(-1)], vec![int(1)]]);
    assert_eq!(boundary_matrix(&tri, 0).unwrap().rows(), 0);
}

#[test]
fn small_betti_numbers() {
    let surface = tetrahedron_surface();
    assert_eq!(betti(&surface, 2).unwrap().betti, 1);
    assert_eq!(betti(&surface, 1).unwrap().betti, 0);
    assert_eq!(betti(&surface, 0).unwrap().betti, 1);

    let solid = SimplicialComplex::from_maximal(names(4), &[vec![0, 1, 2, 3]], None);
    assert_eq!(betti(&solid, 3).unwrap().rank_boundary, 1);
    assert_eq!(betti(&solid, 2).unwrap().betti, 0);

    let points = SimplicialComplex::from_maximal(names(2), &[vec![0], vec![1]], None);
    assert_eq!(betti(&points, 0).unwrap().betti, 2);

    let r = betti(&surface, 2).unwrap();
    assert_eq!(r.betti, r.chain_dim - r.rank_boundary - r.rank_next_boundary);
}

#[test]
fn shallow_skeleton_is_reported() {
    let shallow = SimplicialComplex::from_maximal(names(3), &[vec![0, 1, 2]], Some(1));
    assert!(matches!(betti(&shallow, 1), Err(TopologyError::SkeletonTooShallow { needed: 2, limit: 1 })));
}

#[test]
fn insertion_adds_every_face() {
    let mut complex = SimplicialComplex::new(names(4), None);
    complex.insert(&[2, 0, 1]).unwrap();
    assert_eq!(complex.counts(), vec![4, 3, 1]);
    assert!(complex.contains(&[0, 2]));
    assert!(complex.is_downward_closed());
    assert!(complex.insert(&[0, 7]).is_err());
    let mut shallow = SimplicialComplex::new(names(4), Some(1));
    assert!(matches!(shallow.insert(&[0, 1, 2]), Err(TopologyError::SkeletonTooShallow { .. })));
}

#[test]
fn disjoint_cubes_have_a_discrete_nerve() {
    let cube = unit_cube();
    let family = generic_family(&cube, &[Vec3::zero(), Vec3::from_ints(3, 0, 0), Vec3::from_ints(0, 3, 0)]);
    let nerve = nerve_skeleton(&family, 2).unwrap();
    assert_eq!(nerve.counts(), vec![3]);
    assert_eq!((nerve.count(1), nerve.count(2)), (0, 0));
    assert_eq!(betti(&nerve, 0).unwrap().betti, 3);
}

#[test]
fn single_body_has_one_hole() {
    let report = hole_count(&generic_family(&unit_cube(), &[Vec3::zero()])).unwrap();
    assert_eq!((report.holes, report.upper_bound), (1, 1));
    assert!(upper_bound_holds(&report));
}

#[test]
fn two_disjoint_bodies_have_two_components() {
    let family = generic_family(&unit_cube(), &[Vec3::zero(), Vec3::from_ints(5, 5, 5)]);
    let nerve = nerve_skeleton(&family, 1).unwrap();
    assert_eq!(betti(&nerve, 0).unwrap().betti, 2);
}

#[test]
fn universal_family_at_two() {
    let v = validated_two();
    assert_eq!(v.complex.count(2), 18);
    assert_eq!(v.complex.count(3), 2);
    assert!(verify_nerve_matches(&v.complex, &v.prediction).unwrap().matches);
    let report = hole_count(&v.family).unwrap();
    assert_eq!(report.betti2.betti, 6);
    assert_eq!((report.holes, report.upper_bound), (7, 21));
    assert!(upper_bound_holds(&report));
}

#[test]
fn boundaries_compose_to_zero() {
    assert_boundaries_compose_to_zero(&validated_two().complex);
    assert_boundaries_compose_to_zero(&tetrahedron_surface());
    assert_boundaries_compose_to_zero(&SimplicialComplex::from_maximal(names(5), &[vec![0, 1, 2, 3, 4]], None));
}

#[test]
fn betti_numbers_ignore_vertex_order() {
    let complex = &validated_two().complex;
    let reference: Vec<usize> = (0..=2).map(|i| betti(complex, i).unwrap().betti).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let mut perm: Vec<usize> = (0..complex.vertex_count()).collect();
        perm.shuffle(&mut rng);
        let shuffled = complex.relabeled(&perm).unwrap();
        assert_eq!(shuffled.counts(), complex.counts());
        let bettis: Vec<usize> = (0..=2).map(|i| betti(&shuffled, i).unwrap().betti).collect();
        assert_eq!(bettis, reference);
        assert_boundaries_compose_to_zero(&shuffled);
    }
    assert!(complex.relabeled(&[0, 0, 1, 2, 3, 4]).is_err());
}

#[test]
fn random_families_respect_the_upper_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let members: Vec<Translate> = (0..n)
            .map(|i| {
                let body = loop {
                    let pts: Vec<Vec3> = (0..8)
                        .map(|_| Vec3::new(rat(rng.gen_range(0..=12), 2), rat(rng.gen_range(0..=12), 2), rat(rng.gen_range(0..=12), 2)))
                        .collect();
                    if let Ok(b) = convex_hull(&pts) {
                        break b;
                    }
                };
                let offset = Vec3::from_ints(rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(0..=4));
                Translate::new(Arc::new(body), offset, Role::Generic, i + 1)
            })
            .collect();
        let family = TranslateFamily::new(members).unwrap();
        let report = hole_count(&family).unwrap();
        assert!(upper_bound_holds(&report), "{report:?}");
        assert_boundaries_compose_to_zero(&nerve_skeleton(&family, 3).unwrap());
    }
}

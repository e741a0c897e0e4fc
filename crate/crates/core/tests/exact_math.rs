use holecount::exact_math::{
    format_rational, int, is_canonical, lp_feasible, matrix_rank, parse_rational, rat, ExactScalar, Feasibility,
    LinearSystem, SparseMatrix,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Rank by textbook dense Gaussian elimination over the rationals.
fn dense_rank(rows: &[Vec<ExactScalar>]) -> usize {
    let mut a: Vec<Vec<ExactScalar>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot;
                let pivot_row = a[rank].clone();
                for (entry, p) in a[r].iter_mut().zip(&pivot_row).skip(c) {
                    *entry -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn small_rational() -> impl Strategy<Value = ExactScalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<ExactScalar>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(
            proptest::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small_rational()], c),
            r,
        )
    })
}

/// A constraint `normal . x <= offset` over at most three variables.
fn constraint(vars: usize) -> impl Strategy<Value = (Vec<ExactScalar>, ExactScalar)> {
    (proptest::collection::vec(-3i64..=3, vars), -4i64..=4)
        .prop_map(|(n, b)| (n.into_iter().map(int).collect(), int(b)))
}

/// Every point of the lattice `(1/4) Z^vars` inside `[-4, 4]^vars`.
fn lattice(vars: usize) -> Vec<Vec<ExactScalar>> {
    let axis: Vec<ExactScalar> = (-16..=16).map(|k| rat(k, 4)).collect();
    let mut points = vec![Vec::new()];
    for _ in 0..vars {
        points = points
            .into_iter()
            .flat_map(|p: Vec<ExactScalar>| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(a.clone());
                    q
                })
            })
            .collect();
    }
    points
}

#[test]
fn unit_interval_is_feasible() {
    let mut sys = LinearSystem::new(1);
    sys.add_ge(vec![int(1)], int(0)).add_le(vec![int(1)], int(1));
    let result = lp_feasible(&sys).unwrap();
    let x = result.witness().expect("feasible");
    assert!(sys.is_satisfied_by(x));
    // The solver returns an endpoint; which one depends on the pivot order.
    assert!(x[0] == int(0) || x[0] == int(1));
}

#[test]
fn contradictory_bounds_carry_a_certificate() {
    let mut sys = LinearSystem::new(1);
    sys.add_ge(vec![int(1)], int(1)).add_le(vec![int(1)], int(0));
    match lp_feasible(&sys).unwrap() {
        Feasibility::Infeasible(cert) => assert!(sys.is_infeasibility_certificate(&cert)),
        Feasibility::Feasible(x) => panic!("found {x:?} in an empty system"),
    }
}

#[test]
fn overlapping_cubes_meet_in_upper_corner_region() {
    let mut sys = LinearSystem::new(3);
    for axis in 0..3 {
        let e: Vec<ExactScalar> = (0..3).map(|i| int((i == axis) as i64)).collect();
        sys.add_ge(e.clone(), int(0)).add_le(e.clone(), int(1));
        sys.add_ge(e.clone(), rat(1, 2)).add_le(e, rat(3, 2));
    }
    let corner = vec![rat(3, 4); 3];
    assert!(sys.is_satisfied_by(&corner));
    let result = lp_feasible(&sys).unwrap();
    let x = result.witness().expect("feasible");
    assert!(sys.is_satisfied_by(x));
    assert!(x.iter().all(|c| *c >= rat(1, 2) && *c <= int(1)));
}

#[test]
fn mismatched_constraint_length_is_an_input_error() {
    let mut sys = LinearSystem::new(2);
    sys.add_le(vec![int(1)], int(0));
    assert!(lp_feasible(&sys).is_err());
}

#[test]
fn equality_constraints_are_honoured() {
    let mut sys = LinearSystem::new(2);
    sys.add_eq(vec![int(1), int(1)], int(3))
        .add_ge(vec![int(1), int(0)], int(2))
        .add_ge(vec![int(0), int(1)], int(2));
    assert!(!lp_feasible(&sys).unwrap().is_feasible());
    let mut loose = LinearSystem::new(2);
    loose.add_eq(vec![int(1), int(1)], int(3)).add_ge(vec![int(1), int(0)], int(2));
    let result = lp_feasible(&loose).unwrap();
    assert!(loose.is_satisfied_by(result.witness().unwrap()));
}

#[test]
fn small_rank_examples() {
    assert_eq!(matrix_rank(&SparseMatrix::identity(3)), 3);
    assert_eq!(matrix_rank(&SparseMatrix::new(4, 7)), 0);
}

#[test]
fn boundary_of_tetrahedron_surface_has_rank_three() {
    // Columns: triangles 012, 013, 023, 123. Rows: edges 01, 02, 03, 12, 13, 23.
    let e = |a: usize, b: usize| [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().position(|&p| p == (a, b)).unwrap();
    let mut d2 = SparseMatrix::new(6, 4);
    for (col, [a, b, c]) in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].into_iter().enumerate() {
        d2.set(e(b, c), col, int(1));
        d2.set(e(a, c), col, int(-1));
        d2.set(e(a, b), col, int(1));
    }
    assert_eq!(matrix_rank(&d2), 3);
    assert_eq!(d2.nullity(), 1);
}

#[test]
fn parse_and_format_round_trip() {
    for text in ["0", "-7", "33/20", "-1/18856"] {
        let q = parse_rational(text).unwrap();
        assert!(is_canonical(&q));
        assert_eq!(format_rational(&q), text);
    }
    assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("one").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_dense_elimination(rows in matrix(6, 7)) {
        let sparse = SparseMatrix::from_dense(&rows);
        prop_assert_eq!(matrix_rank(&sparse), dense_rank(&rows));
        prop_assert_eq!(sparse.nullity(), sparse.cols() - dense_rank(&rows));
    }

    #[test]
    fn arithmetic_stays_canonical(a in small_rational(), b in small_rational(), c in small_rational()) {
        let values = [&a + &b, &a - &c, &a * &b * &c, (&a + &b) * (&b - &c)];
        for v in values.iter() {
            prop_assert!(is_canonical(v));
        }
        if !c.is_zero() {
            prop_assert!(is_canonical(&(&a / &c)));
            prop_assert!(!(&a / &c).denom().is_negative());
        }
        prop_assert!(is_canonical(&ExactScalar::one()));
    }

    #[test]
    fn lp_agrees_with_lattice_search(
        vars in 1usize..=3,
        rows in proptest::collection::vec(constraint(3), 1..=12),
    ) {
        let mut sys = LinearSystem::new(vars);
        // Keep the search finite: every variable lies in [-4, 4].
        for axis in 0..vars {
            let e: Vec<ExactScalar> = (0..vars).map(|i| int((i == axis) as i64)).collect();
            sys.add_le(e.clone(), int(4)).add_ge(e, int(-4));
        }
        for (normal, offset) in rows {
            sys.add_le(normal[..vars].to_vec(), offset);
        }
        match lp_feasible(&sys).unwrap() {
            Feasibility::Feasible(x) => prop_assert!(sys.is_satisfied_by(&x)),
            Feasibility::Infeasible(cert) => {
                prop_assert!(sys.is_infeasibility_certificate(&cert));
                prop_assert!(lattice(vars).iter().all(|p| !sys.is_satisfied_by(p)));
            }
        }
    }
}

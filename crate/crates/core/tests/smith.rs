use proptest::prelude::*;
use tiltbase_core::linalg::{cokernel_invariants, kernel, smith_normal_form, solve, BaseRing, Matrix};

fn bases() -> Vec<BaseRing> {
    vec![
        BaseRing::Integers,
        BaseRing::integers_mod(12).unwrap(),
        BaseRing::integers_mod(7).unwrap(),
        BaseRing::integers_loc(6).unwrap(),
    ]
}

fn matrix() -> impl Strategy<Value = (usize, usize, usize, Vec<i64>)> {
    (0..4usize, 1..6usize, 1..6usize)
        .prop_flat_map(|(b, r, c)| (Just(b), Just(r), Just(c), prop::collection::vec(-30i64..=30, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_is_valid((b, r, c, e) in matrix()) {
        let base = &bases()[b];
        let a = Matrix::from_ints(base, r, c, &e);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        prop_assert_eq!(snf.u.mul(&snf.u_inv), Matrix::identity(base, r));
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
        let d = snf.diagonal();
        prop_assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), snf.rank);
        for w in d.windows(2) {
            prop_assert!(base.divides(&w[0], &w[1]), "{} does not divide {}", base.display(&w[0]), base.display(&w[1]));
        }
    }

    #[test]
    fn kernel_and_solve_agree((b, r, c, e) in matrix(), x in prop::collection::vec(-9i64..=9, 6)) {
        let base = &bases()[b];
        let a = Matrix::from_ints(base, r, c, &e);
        prop_assert!(a.mul(&kernel(&a)).is_zero());
        // a right-hand side in the image is always solvable
        let x: Vec<_> = x[..c].iter().map(|&v| base.from_int(v)).collect();
        let rhs = a.mul_vec(&x);
        let y = solve(&a, &rhs).unwrap().expect("image vector is solvable");
        prop_assert_eq!(a.mul_vec(&y), rhs);
    }

    #[test]
    fn invariants_ignore_unimodular_changes((r, e) in (1..5usize).prop_flat_map(|r| (Just(r), prop::collection::vec(-20i64..=20, r * r))), k in -5i64..=5) {
        let z = BaseRing::Integers;
        let a = Matrix::from_ints(&z, r, r, &e);
        // elementary column operation: add k times column 0 to the last column
        let mut op = Matrix::identity(&z, r);
        if r > 1 {
            op.set(0, r - 1, z.from_int(k));
        }
        prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&a.mul(&op)));
        prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&op.transpose().mul(&a)));
    }
}

#[test]
fn known_forms() {
    let z = BaseRing::Integers;
    let a = Matrix::from_rows(&z, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let d: Vec<String> = smith_normal_form(&a).diagonal().iter().map(|e| z.display(e).to_string()).collect();
    assert_eq!(d, ["2", "6", "12"]);

    // over Z/12, 8 is an associate of 4
    let m = BaseRing::integers_mod(12).unwrap();
    let d = smith_normal_form(&Matrix::from_rows(&m, &[vec![8]])).diagonal();
    assert_eq!(m.display(&d[0]).to_string(), "4");

    // over Z[1/6], 12 is a unit times 1 and 10 an associate of 5
    let l = BaseRing::integers_loc(6).unwrap();
    let d = smith_normal_form(&Matrix::from_rows(&l, &[vec![12, 0], vec![0, 10]])).diagonal();
    let d: Vec<String> = d.iter().map(|e| l.display(e).to_string()).collect();
    assert_eq!(d, ["1", "5"]);
}

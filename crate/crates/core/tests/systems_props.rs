mod common;

use dvcs_core::controllability::{ctrb_matrix, quotient_ctrb_subspace};
use dvcs_core::mixdim::vec_equivalent;
use dvcs_core::numerics::{inverse, rank, rat, Matrix, RMatrix, Rational};
use dvcs_core::systems::{
    apply_pseudo_transform, lift_system, project_system, systems_equivalent, LinSys,
};
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |d| Matrix::from_fn(rows, cols, |i, j| rat(d[i * cols + j], 1)))
}

fn system(max_n: usize) -> impl Strategy<Value = LinSys<Rational>> {
    (1..=max_n, 1..=2usize)
        .prop_flat_map(|(n, r)| (int_matrix(n, n), int_matrix(n, r)))
        .prop_map(|(a, b)| LinSys::new("s", a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lifting_keeps_ctrb_rank(s in system(4), k in 1usize..=3) {
        let lifted = lift_system(&s, k * s.dim()).unwrap();
        let before = rank(&ctrb_matrix(s.a(), s.b()).unwrap());
        let after = rank(&ctrb_matrix(lifted.a(), lifted.b()).unwrap());
        prop_assert_eq!(before, after);
    }

    #[test]
    fn project_undoes_lift(s in system(4), k in 1usize..=3) {
        let irreducible = project_system(&s).sys;
        let rep = project_system(&lift_system(&irreducible, k * irreducible.dim()).unwrap());
        prop_assert_eq!(&rep.sys, &irreducible);
        prop_assert_eq!(rep.multiplier_stripped, k);
    }

    #[test]
    fn lift_family_is_one_class(s in system(3), a in 1usize..=3, b in 1usize..=3, c in 1usize..=3) {
        let p = s.dim();
        let (la, lb, lc) = (
            lift_system(&s, a * p).unwrap(),
            lift_system(&s, b * p).unwrap(),
            lift_system(&s, c * p).unwrap(),
        );
        prop_assert!(systems_equivalent(&la, &la).unwrap());
        prop_assert!(systems_equivalent(&la, &lb).unwrap());
        prop_assert!(systems_equivalent(&lb, &la).unwrap());
        prop_assert!(systems_equivalent(&lb, &lc).unwrap());
        prop_assert!(systems_equivalent(&la, &lc).unwrap());
    }

    #[test]
    fn pseudo_transform_round_trip(s in system(4), seed in prop::collection::vec(-3i64..=3, 16), k in 1usize..=2) {
        let lifted = lift_system(&s, k * s.dim()).unwrap();
        let m = s.dim();
        let t = Matrix::from_fn(m, m, |i, j| rat(seed[i * m + j], 1) + if i == j { rat(10, 1) } else { rat(0, 1) });
        prop_assume!(rank(&t) == m);
        let there = apply_pseudo_transform(&lifted, &t).unwrap();
        let back = apply_pseudo_transform(&there, &inverse(&t).unwrap()).unwrap();
        prop_assert_eq!(back, lifted);
    }

    #[test]
    fn lifted_class_reps_match(s in system(4), k in 2usize..=3) {
        let lifted = lift_system(&s, k * s.dim()).unwrap();
        let base = quotient_ctrb_subspace(&s);
        let high = quotient_ctrb_subspace(&lifted);
        prop_assert_eq!(base.reps.len(), high.reps.len());
        for (x, y) in base.reps.iter().zip(&high.reps) {
            prop_assert!(vec_equivalent(&x.irreducible, &y.irreducible).unwrap());
        }
    }
}

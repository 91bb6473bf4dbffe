use proptest::prelude::*;
use sublinext::rational::{self, Rational};
use sublinext::{IdealSpec, Vector};

fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=4).prop_map(|(p, q)| rational::ratio(p, q))
}

fn vec_n(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rat(), n).prop_map(Vector::new)
}

fn triple() -> impl Strategy<Value = (Vector, Vector, Vector)> {
    (1usize..=5).prop_flat_map(|n| (vec_n(n), vec_n(n), vec_n(n)))
}

proptest! {
    #[test]
    fn meet_join_laws((x, y, z) in triple()) {
        let m = |a: &Vector, b: &Vector| a.meet(b).unwrap();
        let j = |a: &Vector, b: &Vector| a.join(b).unwrap();
        prop_assert_eq!(m(&x, &y), m(&y, &x));
        prop_assert_eq!(j(&x, &y), j(&y, &x));
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
        prop_assert_eq!(j(&j(&x, &y), &z), j(&x, &j(&y, &z)));
        prop_assert_eq!(m(&x, &j(&x, &y)), x.clone());
        prop_assert_eq!(j(&x, &m(&x, &y)), x.clone());
        prop_assert_eq!(m(&x, &j(&y, &z)), j(&m(&x, &y), &m(&x, &z)));
        // Translation invariance and the identity x + y = x ∨ y + x ∧ y.
        prop_assert_eq!(j(&(&x + &z), &(&y + &z)), &j(&x, &y) + &z);
        prop_assert_eq!(&x + &y, &j(&x, &y) + &m(&x, &y));
    }

    #[test]
    fn parts_and_modulus((x, y, _) in triple()) {
        let (p, n) = (x.pos_part(), x.neg_part());
        prop_assert_eq!(&p - &n, x.clone());
        prop_assert_eq!(&p + &n, x.abs_val());
        prop_assert!(p.is_disjoint(&n).unwrap());
        prop_assert!(p.is_nonneg() && n.is_nonneg());
        prop_assert!((&x + &y).abs_val().partial_leq(&(&x.abs_val() + &y.abs_val())).unwrap());
        prop_assert!(x.meet(&y).unwrap().partial_leq(&x).unwrap());
        prop_assert!(x.partial_leq(&x.join(&y).unwrap()).unwrap());
    }

    #[test]
    fn ideals_are_solid(x in vec_n(4), mask in 0u8..16) {
        let a = IdealSpec::new(4, (0..4).filter(|k| mask & (1 << k) != 0)).unwrap();
        let projected = sublinext::lattice::ideal_project(&a, &x).unwrap();
        prop_assert!(a.contains(&projected));
        prop_assert!(a.contains(&projected.abs_val()));
        let rest = sublinext::lattice::ideal_project(&a.complement(), &x).unwrap();
        prop_assert!(projected.is_disjoint(&rest).unwrap());
        prop_assert_eq!(&projected + &rest, x);
    }
}

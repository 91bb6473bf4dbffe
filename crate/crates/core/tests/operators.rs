use proptest::prelude::*;
use sublinext::engine::{
    hb_extend_full_with, kantorovich_extend, majorizing_envelope_with, EnvelopeMode, ProbeConfig,
};
use sublinext::fixtures::{
    random_majorizing_subspace, random_maxlin_with, random_monotone_maxlin_with, random_subspace, Lcg64,
};
use sublinext::rational::{self, Rational};
use sublinext::{DomainedOperator, Form, MaxLinOperator, PosPartForm, Vector};

fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=4).prop_map(|(p, q)| rational::ratio(p, q))
}

fn vec_n(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rat(), n).prop_map(Vector::new)
}

fn leq(a: &Vector, b: &Vector) -> bool {
    a.partial_leq(b).unwrap()
}

fn monotone(seed: u64, n: usize) -> MaxLinOperator {
    random_monotone_maxlin_with(&mut Lcg64::new(seed), n, 2, 3, 4)
}

fn case() -> impl Strategy<Value = (u64, Vector, Vector)> {
    (any::<u64>(), 1usize..=4).prop_flat_map(|(seed, n)| (Just(seed), vec_n(n), vec_n(n)))
}

proptest! {
    #[test]
    fn forms_are_sublinear((seed, x, y) in case(), l in (0i64..=12, 1i64..=4)) {
        let n = x.len();
        let t = random_maxlin_with(&mut Lcg64::new(seed), n, 2, 3, 4);
        let p = Form::PosPart(PosPartForm::new(monotone(seed, n)).unwrap());
        for f in [Form::MaxLin(t), p] {
            let sum = &f.evaluate(&x).unwrap() + &f.evaluate(&y).unwrap();
            prop_assert!(leq(&f.evaluate(&(&x + &y)).unwrap(), &sum));
            let l = rational::ratio(l.0, l.1);
            prop_assert_eq!(f.evaluate(&x.scale(&l)).unwrap(), f.evaluate(&x).unwrap().scale(&l));
        }
    }

    #[test]
    fn modulus_inequality((seed, x, y) in case()) {
        let q = monotone(seed, x.len());
        let d = &q.evaluate(&x).unwrap() - &q.evaluate(&y).unwrap();
        let bound = q.evaluate(&(&x - &y).abs_val()).unwrap();
        prop_assert!(leq(&d.abs_val(), &bound));
    }

    #[test]
    fn kantorovich_agrees_on_positive_cone((seed, x, _) in case()) {
        let t = monotone(seed, x.len());
        let s = kantorovich_extend(&t, &ProbeConfig::new(seed, 10)).unwrap();
        prop_assert!(s.report.all_passed());
        let xp = x.pos_part();
        prop_assert_eq!(Form::PosPart(s.operator).evaluate(&xp).unwrap(), t.evaluate(&xp).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn envelope_modes_agree(seed in any::<u64>(), n in 2usize..=3, x in vec_n(3)) {
        let mut rng = Lcg64::new(seed);
        let y = random_subspace(&mut rng, n, 1);
        let pm = random_maxlin_with(&mut rng, n, 1, 3, 4);
        // A single generator of p is a linear map below p.
        let a = MaxLinOperator::linear(n, vec![pm.component(0)[0].clone()]).unwrap();
        let p: Form = pm.into();
        let s = DomainedOperator::on_subspace(a, &y).unwrap();
        let cfg = ProbeConfig::new(seed, 10);
        let explicit = match hb_extend_full_with(&s, &p, &cfg, EnvelopeMode::Explicit) {
            Ok(e) => e,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let oracle = hb_extend_full_with(&s, &p, &cfg, EnvelopeMode::Oracle).unwrap();
        prop_assert!(explicit.report.all_passed(), "{}", explicit.report);
        prop_assert!(oracle.report.all_passed(), "{}", oracle.report);
        let x = Vector::new(x.entries()[..n].to_vec());
        prop_assert_eq!(explicit.envelope.evaluate(&x).unwrap(), oracle.envelope.evaluate(&x).unwrap());
        prop_assert!(leq(&explicit.envelope.evaluate(&x).unwrap(), &p.evaluate(&x).unwrap()));
    }

    #[test]
    fn majorizing_modes_agree(seed in any::<u64>(), n in 2usize..=3, x in vec_n(3)) {
        let mut rng = Lcg64::new(seed);
        let g = random_majorizing_subspace(&mut rng, n, 1);
        let t: Form = random_monotone_maxlin_with(&mut rng, n, 1, 2, 4).into();
        let cfg = ProbeConfig::new(seed, 10);
        let explicit = majorizing_envelope_with(&t, &g, &cfg, EnvelopeMode::Explicit).unwrap();
        let oracle = majorizing_envelope_with(&t, &g, &cfg, EnvelopeMode::Oracle).unwrap();
        prop_assert!(explicit.report.all_passed(), "{}", explicit.report);
        prop_assert!(oracle.report.all_passed(), "{}", oracle.report);
        let x = Vector::new(x.entries()[..n].to_vec());
        prop_assert_eq!(explicit.envelope.evaluate(&x).unwrap(), oracle.envelope.evaluate(&x).unwrap());
    }
}

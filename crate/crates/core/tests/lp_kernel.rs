use proptest::prelude::*;
use sublinext::fixtures::{Lcg64, LpInstance};
use sublinext::lp::{enumerate_vertices, solve_lp, verify_certificate, LpResult, LpStatus};
use sublinext::Error;

fn instance() -> impl Strategy<Value = LpInstance> {
    (any::<u64>(), 1usize..=4, 1usize..=7).prop_map(|(seed, vars, rows)| {
        LpInstance::random(&mut Lcg64::new(seed), vars, rows)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn duality_and_certificates(inst in instance()) {
        let (primal, dual) = (inst.primal(), inst.dual());
        let p = solve_lp(&primal).unwrap();
        let d = solve_lp(&dual).unwrap();
        prop_assert!(verify_certificate(&primal, &p));
        prop_assert!(verify_certificate(&dual, &d));
        match (&p, &d) {
            (LpResult::Optimal { value: vp, .. }, LpResult::Optimal { value: vd, .. }) => {
                prop_assert_eq!(vp.clone(), -vd.clone());
            }
            (LpResult::Unbounded { .. }, _) => prop_assert_eq!(d.status(), LpStatus::Infeasible),
            (LpResult::Infeasible { .. }, _) => prop_assert_ne!(d.status(), LpStatus::Optimal),
            _ => prop_assert!(false, "primal optimal but dual {:?}", d.status()),
        }
    }

    #[test]
    fn value_matches_vertex_maximum(inst in instance()) {
        let p = solve_lp(&inst.primal()).unwrap();
        match enumerate_vertices(&inst.polytope()) {
            Ok(vertices) if vertices.is_empty() => prop_assert_eq!(p.status(), LpStatus::Infeasible),
            Ok(vertices) => {
                let best = vertices.iter().map(|v| inst.objective.dot(v)).max().unwrap();
                prop_assert_eq!(p.value(), Some(&best));
            }
            Err(Error::UnboundedPolytope) => prop_assert_ne!(p.status(), LpStatus::Infeasible),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn tampered_optimum_is_rejected(inst in instance()) {
        let primal = inst.primal();
        if let LpResult::Optimal { value, point, dual } = solve_lp(&primal).unwrap() {
            let bumped = LpResult::Optimal { value: value + sublinext::rational::one(), point, dual };
            prop_assert!(!verify_certificate(&primal, &bumped));
        }
    }
}

#[test]
fn deterministic() {
    let inst = LpInstance::random(&mut Lcg64::new(42), 4, 6);
    assert_eq!(solve_lp(&inst.primal()).unwrap(), solve_lp(&inst.primal()).unwrap());
}

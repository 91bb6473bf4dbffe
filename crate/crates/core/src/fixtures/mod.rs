//! Concrete operator instances, seeded generators and brute-force oracles.

mod capacity;
mod lp;
mod oracle;
mod rng;

pub use capacity::{
    parse_subset, random_submodular, subset_label, Capacity, CAPACITY_BOUND, LOVASZ_BOUND,
    SUBMODULAR_BOUND,
};
pub use lp::LpInstance;
pub use oracle::{grid_sup_oracle, GridDomain, GRID_DIM_BOUND};
pub use rng::Lcg64;

use crate::lattice::{SubspaceSpec, Vector};
use crate::linalg;
use crate::ops::MaxLinOperator;

/// A monotone MaxLin operator with `gens_per_component` generators per
/// component, entries `p/q` with `0 <= p <= magnitude`, `1 <= q <= magnitude`.
pub fn random_monotone_maxlin(
    seed: u64,
    n: usize,
    m: usize,
    gens_per_component: usize,
    magnitude: i64,
) -> MaxLinOperator {
    random_monotone_maxlin_with(&mut Lcg64::new(seed), n, m, gens_per_component, magnitude)
}

pub fn random_monotone_maxlin_with(
    rng: &mut Lcg64,
    n: usize,
    m: usize,
    gens_per_component: usize,
    magnitude: i64,
) -> MaxLinOperator {
    assert!(n > 0 && m > 0 && gens_per_component > 0, "sizes must be positive");
    let components = (0..m)
        .map(|_| {
            (0..gens_per_component)
                .map(|_| (0..n).map(|_| rng.nonneg_rational(magnitude)).collect())
                .collect()
        })
        .collect();
    MaxLinOperator::new(n, components)
        .expect("well-formed components")
        .dedup()
}

/// A MaxLin operator with arbitrary-sign generators.
pub fn random_maxlin_with(
    rng: &mut Lcg64,
    n: usize,
    m: usize,
    gens_per_component: usize,
    magnitude: i64,
) -> MaxLinOperator {
    let components = (0..m)
        .map(|_| {
            (0..gens_per_component)
                .map(|_| (0..n).map(|_| rng.rational(magnitude)).collect())
                .collect()
        })
        .collect();
    MaxLinOperator::new(n, components)
        .expect("well-formed components")
        .dedup()
}

/// A random subspace of `Q^n` of rank exactly `r` with small integer
/// basis entries.
pub fn random_subspace(rng: &mut Lcg64, n: usize, r: usize) -> SubspaceSpec {
    assert!(r <= n);
    loop {
        let basis: Vec<Vector> = (0..r)
            .map(|_| (0..n).map(|_| crate::rational::int(rng.range(-3, 3))).collect())
            .collect();
        if linalg::rank(&basis) == r {
            return SubspaceSpec::new(n, basis).expect("independent basis");
        }
    }
}

/// A random Riesz subspace: the span of nonnegative vectors with pairwise
/// disjoint supports.
pub fn random_riesz_subspace(rng: &mut Lcg64, n: usize) -> SubspaceSpec {
    let blocks = rng.range(0, n as i64) as usize;
    let mut labels: Vec<Option<usize>> = (0..n)
        .map(|_| {
            let b = rng.range(0, blocks as i64) as usize;
            (b < blocks).then_some(b)
        })
        .collect();
    rng.shuffle(&mut labels);
    let basis: Vec<Vector> = (0..blocks)
        .map(|b| {
            labels
                .iter()
                .map(|&l| {
                    if l == Some(b) {
                        crate::rational::int(rng.range(1, 3))
                    } else {
                        crate::rational::zero()
                    }
                })
                .collect::<Vector>()
        })
        .filter(|v| !v.is_zero())
        .collect();
    SubspaceSpec::new(n, basis).expect("disjoint supports are independent")
}

/// A random majorizing subspace: contains a strictly positive vector.
pub fn random_majorizing_subspace(rng: &mut Lcg64, n: usize, r: usize) -> SubspaceSpec {
    assert!(r >= 1 && r <= n);
    loop {
        let positive: Vector = (0..n)
            .map(|_| crate::rational::int(rng.range(1, 3)))
            .collect();
        let mut basis = vec![positive];
        basis.extend(
            (1..r).map(|_| (0..n).map(|_| crate::rational::int(rng.range(-3, 3))).collect()),
        );
        if linalg::rank(&basis) == r {
            return SubspaceSpec::new(n, basis).expect("independent basis");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_majorizing, is_riesz_subspace};
    use crate::ops::is_monotone;

    #[test]
    fn random_maxlin_is_deterministic_and_monotone() {
        let a = random_monotone_maxlin(1, 2, 1, 2, 9);
        let b = random_monotone_maxlin(1, 2, 1, 2, 9);
        assert_eq!(a, b);
        for seed in 0..20 {
            let t = random_monotone_maxlin(seed, 3, 2, 3, 9);
            assert!(is_monotone(&t).holds());
            assert!(t.components().iter().flatten().flat_map(|g| g.iter()).all(|q| {
                q.numer() <= &9.into() && q.denom() <= &9.into()
            }));
        }
    }

    #[test]
    fn random_subspaces_have_their_properties() {
        let mut rng = Lcg64::new(11);
        for _ in 0..20 {
            let g = random_riesz_subspace(&mut rng, 4);
            assert_eq!(is_riesz_subspace(&g).unwrap(), None);
            let h = random_majorizing_subspace(&mut rng, 3, 2);
            assert!(is_majorizing(&h).unwrap().is_some());
            assert_eq!(random_subspace(&mut rng, 4, 2).rank(), 2);
        }
    }
}

use std::collections::BTreeSet;

use itertools::Itertools;
use num::Zero;

use super::Lcg64;
use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::ops::{MaxLinOperator, Verdict};
use crate::rational::{self, Rational};

/// Largest ground set accepted when building a capacity.
pub const CAPACITY_BOUND: usize = 16;
/// Largest ground set for the pairwise submodularity check.
pub const SUBMODULAR_BOUND: usize = 10;
/// Largest ground set for greedy-vector enumeration.
pub const LOVASZ_BOUND: usize = 8;

/// A monotone set function on `{0, …, n-1}` vanishing on the empty set.
/// Subsets are bitmasks: bit `i` set means `i` belongs to the subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capacity {
    n: usize,
    values: Vec<Rational>,
}

impl Capacity {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n > CAPACITY_BOUND {
            return Err(Error::SizeBound(format!(
                "capacities limited to {CAPACITY_BOUND} elements, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "capacity on {n} elements needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::Invalid("capacity of the empty set must be 0".into()));
        }
        for mask in 0..values.len() {
            for i in 0..n {
                let bigger = mask | (1 << i);
                if values[mask] > values[bigger] {
                    return Err(Error::Invalid(format!(
                        "capacity is not monotone: {} exceeds {}",
                        subset_label(mask as u32, n),
                        subset_label(bigger as u32, n)
                    )));
                }
            }
        }
        Ok(Capacity { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> Rational) -> Result<Self> {
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    /// `ν(U) = Σ_{i ∈ U} w_i` for nonnegative weights.
    pub fn additive(weights: &[Rational]) -> Result<Self> {
        Self::from_fn(weights.len(), |mask| subset_sum(weights, mask))
    }

    /// `ν(U) = min(budget, Σ_{i ∈ U} w_i)`, monotone and submodular for
    /// nonnegative weights and budget.
    pub fn budget_additive(weights: &[Rational], budget: &Rational) -> Result<Self> {
        Self::from_fn(weights.len(), |mask| {
            rational::min(&subset_sum(weights, mask), budget).clone()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, mask: u32) -> &Rational {
        &self.values[mask as usize]
    }

    /// Pointwise sum of two capacities on the same ground set.
    pub fn sum(&self, other: &Capacity) -> Result<Capacity> {
        Error::check_dim(self.n, other.n)?;
        Capacity::new(
            self.n,
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        )
    }

    /// Checks `ν(U ∪ V) + ν(U ∩ V) <= ν(U) + ν(V)` for all pairs, returning
    /// a violating pair `(U, V)` as bitmasks.
    pub fn is_submodular(&self) -> Result<Verdict<(u32, u32)>> {
        if self.n > SUBMODULAR_BOUND {
            return Err(Error::SizeBound(format!(
                "submodularity check limited to {SUBMODULAR_BOUND} elements, got {}",
                self.n
            )));
        }
        let full = 1u32 << self.n;
        for u in 0..full {
            for v in u + 1..full {
                if self.value(u | v) + self.value(u & v) > self.value(u) + self.value(v) {
                    return Ok(Verdict::Fails((u, v)));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// The Lovász extension as a single-component MaxLin operator whose
    /// generators are the greedy marginal vectors of all orderings.
    pub fn lovasz_maxlin(&self) -> Result<MaxLinOperator> {
        if self.n > LOVASZ_BOUND {
            return Err(Error::SizeBound(format!(
                "greedy enumeration limited to {LOVASZ_BOUND} elements, got {}",
                self.n
            )));
        }
        if let Verdict::Fails((u, v)) = self.is_submodular()? {
            return Err(Error::Invalid(format!(
                "capacity is not submodular at U = {}, V = {}",
                subset_label(u, self.n),
                subset_label(v, self.n)
            )));
        }
        let mut gens = BTreeSet::new();
        for order in (0..self.n).permutations(self.n) {
            let mut g = vec![rational::zero(); self.n];
            let mut mask = 0u32;
            for &i in &order {
                let next = mask | (1 << i);
                g[i] = self.value(next) - self.value(mask);
                mask = next;
            }
            gens.insert(Vector::new(g));
        }
        MaxLinOperator::scalar(self.n, gens.into_iter().collect())
    }

    /// The Choquet integral of `x >= 0` by the sorting formula.
    pub fn choquet_eval(&self, x: &Vector) -> Result<Rational> {
        Error::check_dim(self.n, x.len())?;
        if !x.is_nonneg() {
            return Err(Error::precondition("Choquet integral needs x >= 0", Some(x.clone())));
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| x[b].cmp(&x[a]).then(a.cmp(&b)));
        let mut total = rational::zero();
        let mut mask = 0u32;
        for (j, &i) in order.iter().enumerate() {
            mask |= 1 << i;
            let next = order.get(j + 1).map_or_else(rational::zero, |&k| x[k].clone());
            total += (&x[i] - next) * self.value(mask);
        }
        Ok(total)
    }
}

fn subset_sum(weights: &[Rational], mask: u32) -> Rational {
    weights
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, w)| w.clone())
        .sum()
}

/// `{0,2}` style label for a bitmask.
pub fn subset_label(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// Parses `{0,2}` (or `{}`) into a bitmask over `n` elements.
pub fn parse_subset(s: &str, n: usize) -> Result<u32> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Invalid(format!("subset {s:?} must look like {{0,1}}")))?;
    let mut mask = 0u32;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| Error::Invalid(format!("bad element {part:?} in subset {s:?}")))?;
        if i >= n {
            return Err(Error::Invalid(format!("element {i} outside ground set of size {n}")));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// A random monotone submodular capacity: the sum of two budget-additive
/// capacities with nonnegative weights.
pub fn random_submodular(rng: &mut Lcg64, n: usize, magnitude: i64) -> Capacity {
    let mut part = || {
        let w: Vec<Rational> = (0..n).map(|_| rng.nonneg_rational(magnitude)).collect();
        let total: Rational = w.iter().cloned().sum();
        let budget = total * rational::ratio(rng.range(1, 4), 4);
        Capacity::budget_additive(&w, &budget).expect("budget-additive capacity")
    };
    let a = part();
    let b = part();
    a.sum(&b).expect("same ground set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn cap(n: usize, pairs: &[(&str, i64)]) -> Capacity {
        let mut values = vec![int(0); 1 << n];
        for (s, v) in pairs {
            values[parse_subset(s, n).unwrap() as usize] = int(*v);
        }
        Capacity::new(n, values).unwrap()
    }

    #[test]
    fn submodularity_examples() {
        let nu = cap(2, &[("{0}", 1), ("{1}", 1), ("{0,1}", 1)]);
        assert!(nu.is_submodular().unwrap().holds());
        let sup = cap(2, &[("{0,1}", 1)]);
        assert_eq!(sup.is_submodular().unwrap(), Verdict::Fails((1, 2)));
        let add = Capacity::additive(&[int(1), int(2), int(3)]).unwrap();
        assert!(add.is_submodular().unwrap().holds());
    }

    #[test]
    fn lovasz_examples() {
        let nu = cap(2, &[("{0}", 1), ("{1}", 1), ("{0,1}", 1)]);
        let t = nu.lovasz_maxlin().unwrap();
        assert_eq!(t.component(0), &[Vector::from_ints(&[0, 1]), Vector::from_ints(&[1, 0])]);
        let add = Capacity::additive(&[int(1), int(1), int(1)]).unwrap();
        assert_eq!(add.lovasz_maxlin().unwrap().component(0), &[Vector::from_ints(&[1, 1, 1])]);
        let two = Capacity::from_fn(3, |m| int(i64::from(m.count_ones().min(2)))).unwrap();
        assert_eq!(
            two.lovasz_maxlin().unwrap().component(0),
            &[
                Vector::from_ints(&[0, 1, 1]),
                Vector::from_ints(&[1, 0, 1]),
                Vector::from_ints(&[1, 1, 0])
            ]
        );
        let sup = cap(2, &[("{0,1}", 1)]);
        assert!(sup.lovasz_maxlin().is_err());
    }

    #[test]
    fn choquet_examples() {
        let nu = cap(2, &[("{0}", 1), ("{1}", 1), ("{0,1}", 1)]);
        assert_eq!(nu.choquet_eval(&Vector::from_ints(&[3, 1])).unwrap(), int(3));
        assert_eq!(nu.choquet_eval(&Vector::zeros(2)).unwrap(), int(0));
        let add = Capacity::additive(&[int(1), int(1)]).unwrap();
        assert_eq!(add.choquet_eval(&Vector::from_ints(&[2, 5])).unwrap(), int(7));
        assert!(add.choquet_eval(&Vector::from_ints(&[-1, 5])).is_err());
    }

    #[test]
    fn rejects_bad_capacities() {
        assert!(Capacity::new(1, vec![int(1), int(1)]).is_err());
        assert!(Capacity::new(1, vec![int(0), int(-1)]).is_err());
        assert!(Capacity::new(2, vec![int(0), int(1)]).is_err());
        assert!(Capacity::budget_additive(&[ratio(1, 2), int(2)], &int(1)).is_ok());
    }

    #[test]
    fn subset_labels_round_trip() {
        for mask in 0..8 {
            assert_eq!(parse_subset(&subset_label(mask, 3), 3).unwrap(), mask);
        }
        assert!(parse_subset("{3}", 3).is_err());
        assert!(parse_subset("0,1", 3).is_err());
    }

    #[test]
    fn random_capacities_are_submodular() {
        let mut rng = Lcg64::new(3);
        for n in 1..=5 {
            let nu = random_submodular(&mut rng, n, 9);
            assert!(nu.is_submodular().unwrap().holds());
        }
    }
}

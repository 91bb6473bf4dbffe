use num::Signed;

use crate::error::{Error, Result};
use crate::lattice::{IdealSpec, Vector};
use crate::ops::Form;
use crate::rational::{self, Rational};

/// Largest dimension the grid oracle will scan.
pub const GRID_DIM_BOUND: usize = 4;
const GRID_POINT_BOUND: usize = 2_000_000;

/// The box `[lo, hi]`, optionally intersected with an ideal (coordinates
/// outside the ideal pinned to zero).
#[derive(Clone, Debug)]
pub struct GridDomain {
    pub lo: Vector,
    pub hi: Vector,
    pub ideal: Option<IdealSpec>,
}

impl GridDomain {
    /// `{y ∈ A : 0 <= y <= x}` for `x >= 0`.
    pub fn ideal_interval(a: &IdealSpec, x: &Vector) -> Self {
        GridDomain {
            lo: Vector::zeros(x.len()),
            hi: x.clone(),
            ideal: Some(a.clone()),
        }
    }

    fn axis(&self, k: usize, step: &Rational) -> Vec<Rational> {
        if let Some(a) = &self.ideal {
            if !a.contains_coord(k) {
                return if self.lo[k].is_positive() || self.hi[k].is_negative() {
                    Vec::new()
                } else {
                    vec![rational::zero()]
                };
            }
        }
        let mut out = Vec::new();
        let mut v = self.lo[k].clone();
        while v <= self.hi[k] {
            out.push(v.clone());
            v += step;
        }
        out
    }
}

/// Componentwise maximum of `t` over the grid `lo + step·Z^n` inside the
/// feasible box. Errors when the feasible set is empty or too large.
pub fn grid_sup_oracle(t: &Form, domain: &GridDomain, step: &Rational) -> Result<Vector> {
    let n = t.in_dim();
    Error::check_dim(n, domain.lo.len())?;
    Error::check_dim(n, domain.hi.len())?;
    if n > GRID_DIM_BOUND {
        return Err(Error::SizeBound(format!(
            "grid oracle limited to dimension {GRID_DIM_BOUND}, got {n}"
        )));
    }
    if !step.is_positive() {
        return Err(Error::Invalid("grid step must be positive".into()));
    }
    let axes: Vec<Vec<Rational>> = (0..n).map(|k| domain.axis(k, step)).collect();
    let count = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
    match count {
        Some(0) => return Err(Error::Invalid("feasible grid is empty".into())),
        Some(c) if c <= GRID_POINT_BOUND => {}
        _ => {
            return Err(Error::SizeBound(format!(
                "grid exceeds {GRID_POINT_BOUND} points"
            )))
        }
    }
    let mut best: Option<Vector> = None;
    let mut idx = vec![0usize; n];
    loop {
        let y: Vector = idx.iter().zip(&axes).map(|(&i, a)| a[i].clone()).collect();
        let v = t.evaluate(&y)?;
        best = Some(match best {
            None => v,
            Some(b) => b.join(&v)?,
        });
        let mut k = 0;
        loop {
            if k == n {
                return Ok(best.expect("nonempty grid"));
            }
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::MaxLinOperator;
    use crate::rational::{int, ratio};

    fn sum3() -> Form {
        MaxLinOperator::scalar(3, vec![Vector::from_ints(&[1, 1, 1])])
            .unwrap()
            .into()
    }

    #[test]
    fn ideal_interval_example() {
        let a = IdealSpec::new(3, [0, 1]).unwrap();
        let d = GridDomain::ideal_interval(&a, &Vector::from_ints(&[1, 2, 3]));
        assert_eq!(grid_sup_oracle(&sum3(), &d, &ratio(1, 4)).unwrap(), Vector::from_ints(&[3]));
    }

    #[test]
    fn singleton_domain() {
        let d = GridDomain {
            lo: Vector::zeros(3),
            hi: Vector::zeros(3),
            ideal: None,
        };
        assert_eq!(grid_sup_oracle(&sum3(), &d, &ratio(1, 4)).unwrap(), Vector::from_ints(&[0]));
    }

    #[test]
    fn refinement_never_decreases() {
        let t: Form = MaxLinOperator::scalar(2, vec![Vector::from_ints(&[1, -1]), Vector::new(vec![ratio(1, 3), int(1)])])
            .unwrap()
            .into();
        let d = GridDomain {
            lo: Vector::from_ints(&[-1, -1]),
            hi: Vector::new(vec![ratio(7, 4), int(1)]),
            ideal: None,
        };
        let coarse = grid_sup_oracle(&t, &d, &ratio(1, 2)).unwrap();
        let fine = grid_sup_oracle(&t, &d, &ratio(1, 4)).unwrap();
        assert!(coarse <= fine);
    }

    #[test]
    fn rejects_bad_input() {
        let d = GridDomain {
            lo: Vector::from_ints(&[1, 0, 0]),
            hi: Vector::from_ints(&[0, 0, 0]),
            ideal: None,
        };
        assert!(grid_sup_oracle(&sum3(), &d, &ratio(1, 4)).is_err());
        let d = GridDomain::ideal_interval(&IdealSpec::full(3), &Vector::from_ints(&[1, 1, 1]));
        assert!(grid_sup_oracle(&sum3(), &d, &int(0)).is_err());
    }
}

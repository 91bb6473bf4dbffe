use super::Lcg64;
use crate::lattice::Vector;
use crate::lp::{LinProgram, Polytope, Relation, VarBound};
use crate::rational;

/// `max c·x` over `{x >= 0 : A x <= b}` with integer entries of `A`, `c` in
/// `[-9, 9]`. Right-hand sides are nonnegative (so 0 is feasible) for every
/// other instance and arbitrary otherwise, which mixes in infeasible ones.
#[derive(Clone, Debug)]
pub struct LpInstance {
    pub objective: Vector,
    pub rows: Vec<(Vector, i64)>,
}

impl LpInstance {
    pub fn random(rng: &mut Lcg64, vars: usize, rows: usize) -> Self {
        let nonneg_rhs = rng.coin();
        let entry = |rng: &mut Lcg64| rational::int(rng.range(-9, 9));
        let objective = (0..vars).map(|_| entry(rng)).collect();
        let rows = (0..rows)
            .map(|_| {
                let row = (0..vars).map(|_| entry(rng)).collect();
                let rhs = if nonneg_rhs { rng.range(0, 9) } else { rng.range(-9, 9) };
                (row, rhs)
            })
            .collect();
        LpInstance { objective, rows }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn primal(&self) -> LinProgram {
        let mut lp = LinProgram::new(self.objective.clone()).with_bounds(vec![VarBound::NonNeg; self.vars()]);
        for (row, rhs) in &self.rows {
            lp.constrain(row.clone(), Relation::Le, rational::int(*rhs));
        }
        lp
    }

    /// `min b·y` over `{y >= 0 : Aᵀ y >= c}`, written as `max -b·y`.
    pub fn dual(&self) -> LinProgram {
        let m = self.rows.len();
        let objective = self.rows.iter().map(|(_, b)| rational::int(-b)).collect();
        let mut lp = LinProgram::new(objective).with_bounds(vec![VarBound::NonNeg; m]);
        for j in 0..self.vars() {
            let col = self.rows.iter().map(|(r, _)| r[j].clone()).collect();
            lp.constrain(col, Relation::Ge, self.objective[j].clone());
        }
        lp
    }

    /// The feasible region as an H-form polytope.
    pub fn polytope(&self) -> Polytope {
        let n = self.vars();
        let mut p = Polytope::new(n);
        for j in 0..n {
            p.add_le(-&Vector::unit(n, j), rational::zero());
        }
        for (row, rhs) in &self.rows {
            p.add_le(row.clone(), rational::int(*rhs));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, LpStatus};

    #[test]
    fn dual_of_square() {
        let inst = LpInstance {
            objective: Vector::from_ints(&[1, 1]),
            rows: vec![(Vector::from_ints(&[1, 0]), 1), (Vector::from_ints(&[0, 1]), 2)],
        };
        let p = solve_lp(&inst.primal()).unwrap();
        let d = solve_lp(&inst.dual()).unwrap();
        assert_eq!(p.value(), Some(&rational::int(3)));
        assert_eq!(d.value(), Some(&rational::int(-3)));
        assert_eq!(d.status(), LpStatus::Optimal);
    }
}

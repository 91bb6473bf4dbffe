//! Dense two-phase tableau simplex on `max c·s, A s = b, s >= 0, b >= 0`
//! with Bland's lowest-index rule.

use num::{Signed, Zero};

use crate::rational::{self, Rational};

pub(crate) enum StdOutcome {
    /// Optimal primal point and row duals `y = c_B B⁻¹`.
    Optimal { x: Vec<Rational>, y: Vec<Rational> },
    /// Phase-one duals: `Aᵀy >= 0` and `b·y < 0`.
    Infeasible { y: Vec<Rational> },
    /// A feasible point and a ray `d >= 0` with `A d = 0`, `c·d > 0`.
    Unbounded { x: Vec<Rational>, ray: Vec<Rational> },
}

struct Tableau {
    /// `m` rows of `n + m + 1` entries: structural, artificial, rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    n: usize,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn width(&self) -> usize {
        self.n + self.rows.len()
    }

    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width()]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for a in self.rows[r].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[r][j].is_zero() {
                d -= &cost[b] * &self.rows[r][j];
            }
        }
        d
    }

    /// Runs simplex iterations; columns `>= allowed` never enter.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> Step {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(j) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Step::Unbounded(j),
            }
        }
    }

    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let m = self.rows.len();
        (0..m)
            .map(|i| {
                let col = self.n + i;
                let mut y = Rational::zero();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[r][col].is_zero() {
                        y += &cost[b] * &self.rows[r][col];
                    }
                }
                y
            })
            .collect()
    }

    fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs(r).clone();
            }
        }
        x
    }
}

pub(crate) fn solve_standard(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> StdOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(b.iter().all(|v| !v.is_negative()));
    let rows = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut r = row.clone();
            r.extend((0..m).map(|k| if k == i { rational::one() } else { rational::zero() }));
            r.push(bi.clone());
            r
        })
        .collect();
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n,
    };

    let mut phase1 = vec![Rational::zero(); n];
    phase1.extend(vec![-rational::one(); m]);
    let width = t.width();
    if let Step::Unbounded(_) = t.run(&phase1, width) {
        unreachable!("phase one objective is bounded above by zero");
    }
    let infeasibility: Rational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| t.rhs(r).clone())
        .sum();
    if infeasibility.is_positive() {
        return StdOutcome::Infeasible {
            y: t.duals(&phase1),
        };
    }
    // Drive zero-level artificials out of the basis where a structural
    // column allows it; rows where none does are redundant and inert.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[r][j].is_zero() && !t.basis.contains(&j)) {
                t.pivot(r, j);
            }
        }
    }

    let mut phase2 = c.to_vec();
    phase2.extend(vec![Rational::zero(); m]);
    match t.run(&phase2, n) {
        Step::Optimal => StdOutcome::Optimal {
            x: t.point(),
            y: t.duals(&phase2),
        },
        Step::Unbounded(j) => {
            let mut ray = vec![Rational::zero(); n];
            ray[j] = rational::one();
            for (r, &bv) in t.basis.iter().enumerate() {
                if bv < n {
                    ray[bv] = -t.rows[r][j].clone();
                }
            }
            StdOutcome::Unbounded { x: t.point(), ray }
        }
    }
}

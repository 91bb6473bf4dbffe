//! Exact rational linear programming.
//!
//! [`solve_lp`] maximises a linear objective under `<=`, `=`, `>=` rows and
//! per-variable sign bounds. Every outcome carries a certificate that
//! [`verify_certificate`] re-checks from the program alone:
//!
//! * `Optimal`: a primal point and a dual vector with equal objective values.
//! * `Infeasible`: a Farkas vector `y` with the row-sign conditions,
//!   `Aᵀy` sign-compatible with the variable bounds, and `b·y < 0`.
//! * `Unbounded`: a feasible point and an improving recession ray.

mod simplex;
mod vertices;

pub use vertices::{enumerate_vertices, enumerate_vertices_with, Polytope, VertexLimits};

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::rational::Rational;
use simplex::{solve_standard, StdOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    Free,
    NonNeg,
    NonPos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub row: Vector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to the constraints and variable bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LinProgram {
    pub objective: Vector,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinProgram {
    /// A program with no constraints and all variables free.
    pub fn new(objective: Vector) -> Self {
        let n = objective.len();
        LinProgram {
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBound::Free; n],
        }
    }

    pub fn with_bounds(mut self, bounds: Vec<VarBound>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn constrain(&mut self, row: Vector, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { row, relation, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        Error::check_dim(n, self.bounds.len())?;
        for c in &self.constraints {
            Error::check_dim(n, c.row.len())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal {
        value: Rational,
        point: Vector,
        dual: Vector,
    },
    Infeasible {
        farkas: Vector,
    },
    Unbounded {
        point: Vector,
        ray: Vector,
    },
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible { .. } => LpStatus::Infeasible,
            LpResult::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&Vector> {
        match self {
            LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }
}

/// How an original variable maps onto standard-form columns.
struct ColumnMap {
    /// `(column, sign)` pairs: `x_j = Σ sign · s_column`.
    parts: Vec<Vec<(usize, i8)>>,
    n_std: usize,
}

impl ColumnMap {
    fn new(bounds: &[VarBound], n_rows_with_slack: usize) -> (Self, usize) {
        let mut parts = Vec::with_capacity(bounds.len());
        let mut col = 0;
        for b in bounds {
            match b {
                VarBound::Free => {
                    parts.push(vec![(col, 1), (col + 1, -1)]);
                    col += 2;
                }
                VarBound::NonNeg => {
                    parts.push(vec![(col, 1)]);
                    col += 1;
                }
                VarBound::NonPos => {
                    parts.push(vec![(col, -1)]);
                    col += 1;
                }
            }
        }
        let first_slack = col;
        (
            ColumnMap {
                parts,
                n_std: col + n_rows_with_slack,
            },
            first_slack,
        )
    }

    fn recover(&self, s: &[Rational]) -> Vector {
        self.parts
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&(c, sign)| if sign > 0 { s[c].clone() } else { -s[c].clone() })
                    .sum()
            })
            .collect()
    }
}

/// Solves `lp` exactly. Terminates by Bland's rule.
pub fn solve_lp(lp: &LinProgram) -> Result<LpResult> {
    lp.validate()?;
    let slack_rows = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let (map, first_slack) = ColumnMap::new(&lp.bounds, slack_rows);
    let n_std = map.n_std;

    let mut a = Vec::with_capacity(lp.constraints.len());
    let mut b = Vec::with_capacity(lp.constraints.len());
    let mut flipped = Vec::with_capacity(lp.constraints.len());
    let mut slack = first_slack;
    for con in &lp.constraints {
        let mut row = vec![Rational::zero(); n_std];
        for (j, p) in map.parts.iter().enumerate() {
            for &(c, sign) in p {
                row[c] = if sign > 0 {
                    con.row[j].clone()
                } else {
                    -con.row[j].clone()
                };
            }
        }
        match con.relation {
            Relation::Le => {
                row[slack] = Rational::from_integer(1.into());
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = Rational::from_integer((-1).into());
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut rhs = con.rhs.clone();
        let flip = rhs.is_negative();
        if flip {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
        }
        a.push(row);
        b.push(rhs);
        flipped.push(flip);
    }
    let mut c = vec![Rational::zero(); n_std];
    for (j, p) in map.parts.iter().enumerate() {
        for &(col, sign) in p {
            c[col] = if sign > 0 {
                lp.objective[j].clone()
            } else {
                -lp.objective[j].clone()
            };
        }
    }

    let unflip = |y: Vec<Rational>| -> Vector {
        y.into_iter()
            .zip(&flipped)
            .map(|(v, &f)| if f { -v } else { v })
            .collect()
    };

    Ok(match solve_standard(&a, &b, &c) {
        StdOutcome::Optimal { x, y } => {
            let point = map.recover(&x);
            let value = lp.objective.dot(&point);
            LpResult::Optimal {
                value,
                point,
                dual: unflip(y),
            }
        }
        StdOutcome::Infeasible { y } => LpResult::Infeasible { farkas: unflip(y) },
        StdOutcome::Unbounded { x, ray } => LpResult::Unbounded {
            point: map.recover(&x),
            ray: map.recover(&ray),
        },
    })
}

fn bound_ok(bound: VarBound, v: &Rational) -> bool {
    match bound {
        VarBound::Free => true,
        VarBound::NonNeg => !v.is_negative(),
        VarBound::NonPos => !v.is_positive(),
    }
}

fn row_ok(relation: Relation, lhs: &Rational, rhs: &Rational) -> bool {
    match relation {
        Relation::Le => lhs <= rhs,
        Relation::Eq => lhs == rhs,
        Relation::Ge => lhs >= rhs,
    }
}

fn is_feasible(lp: &LinProgram, x: &Vector) -> bool {
    x.len() == lp.num_vars()
        && lp.bounds.iter().zip(x).all(|(&b, v)| bound_ok(b, v))
        && lp
            .constraints
            .iter()
            .all(|c| row_ok(c.relation, &c.row.dot(x), &c.rhs))
}

/// Sign conditions on a row multiplier: `<=` rows take `y >= 0`, `>=` rows
/// take `y <= 0`, equality rows are free.
fn multiplier_ok(relation: Relation, y: &Rational) -> bool {
    match relation {
        Relation::Le => !y.is_negative(),
        Relation::Ge => !y.is_positive(),
        Relation::Eq => true,
    }
}

/// `(Aᵀ y)_j`.
fn transpose_apply(lp: &LinProgram, y: &Vector) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); lp.num_vars()];
    for (c, yi) in lp.constraints.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(&c.row) {
            *o += a * yi;
        }
    }
    out
}

/// Re-derives the certificate conditions of `r` for `lp` with exact
/// arithmetic, independently of the solver.
pub fn verify_certificate(lp: &LinProgram, r: &LpResult) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    let m = lp.constraints.len();
    match r {
        LpResult::Optimal { value, point, dual } => {
            if dual.len() != m || !is_feasible(lp, point) || lp.objective.dot(point) != *value {
                return false;
            }
            if !lp
                .constraints
                .iter()
                .zip(dual)
                .all(|(c, y)| multiplier_ok(c.relation, y))
            {
                return false;
            }
            // Dual feasibility: (Aᵀy)_j >= c_j for x_j >= 0, = for free,
            // <= for x_j <= 0.
            let aty = transpose_apply(lp, dual);
            let dual_ok = lp
                .bounds
                .iter()
                .zip(aty.iter().zip(&lp.objective))
                .all(|(b, (g, cj))| match b {
                    VarBound::NonNeg => g >= cj,
                    VarBound::Free => g == cj,
                    VarBound::NonPos => g <= cj,
                });
            let dual_value: Rational = lp.constraints.iter().zip(dual).map(|(c, y)| &c.rhs * y).sum();
            dual_ok && dual_value == *value
        }
        LpResult::Infeasible { farkas } => {
            if farkas.len() != m {
                return false;
            }
            if !lp
                .constraints
                .iter()
                .zip(farkas)
                .all(|(c, y)| multiplier_ok(c.relation, y))
            {
                return false;
            }
            // For feasible x: yᵀA x <= yᵀb by the row signs, while the sign
            // pattern of Aᵀy below forces yᵀA x >= 0.
            let aty = transpose_apply(lp, farkas);
            let signs_ok = lp.bounds.iter().zip(&aty).all(|(b, g)| match b {
                VarBound::NonNeg => !g.is_negative(),
                VarBound::Free => g.is_zero(),
                VarBound::NonPos => !g.is_positive(),
            });
            let yb: Rational = lp.constraints.iter().zip(farkas).map(|(c, y)| &c.rhs * y).sum();
            signs_ok && yb.is_negative()
        }
        LpResult::Unbounded { point, ray } => {
            if !is_feasible(lp, point) || ray.len() != lp.num_vars() {
                return false;
            }
            let ray_ok = lp.bounds.iter().zip(ray).all(|(&b, v)| bound_ok(b, v))
                && lp
                    .constraints
                    .iter()
                    .all(|c| row_ok(c.relation, &c.row.dot(ray), &Rational::zero()));
            ray_ok && lp.objective.dot(ray).is_positive()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn square_lp() -> LinProgram {
        let mut lp = LinProgram::new(v(&[1, 1])).with_bounds(vec![VarBound::NonNeg; 2]);
        lp.constrain(v(&[1, 0]), Relation::Le, int(1));
        lp.constrain(v(&[0, 1]), Relation::Le, int(2));
        lp
    }

    #[test]
    fn optimal_example() {
        let lp = square_lp();
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status(), LpStatus::Optimal);
        assert_eq!(r.value(), Some(&int(3)));
        assert_eq!(r.point(), Some(&v(&[1, 2])));
        assert!(verify_certificate(&lp, &r));
    }

    #[test]
    fn tampered_value_rejected() {
        let lp = square_lp();
        let LpResult::Optimal { point, dual, .. } = solve_lp(&lp).unwrap() else {
            panic!("expected optimum");
        };
        let tampered = LpResult::Optimal {
            value: int(4),
            point,
            dual,
        };
        assert!(!verify_certificate(&lp, &tampered));
    }

    #[test]
    fn infeasible_example() {
        let mut lp = LinProgram::new(v(&[1]));
        lp.constrain(v(&[1]), Relation::Ge, int(1));
        lp.constrain(v(&[1]), Relation::Le, int(0));
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status(), LpStatus::Infeasible);
        assert!(verify_certificate(&lp, &r));
        let LpResult::Infeasible { farkas } = &r else { unreachable!() };
        let negated = LpResult::Infeasible { farkas: -farkas };
        assert!(!verify_certificate(&lp, &negated));
    }

    #[test]
    fn unbounded_example() {
        let lp = LinProgram::new(v(&[1]));
        let r = solve_lp(&lp).unwrap();
        let LpResult::Unbounded { ray, .. } = &r else {
            panic!("expected unbounded, got {r:?}");
        };
        assert_eq!(ray, &v(&[1]));
        assert!(verify_certificate(&lp, &r));
    }

    #[test]
    fn nonpositive_and_equality_rows() {
        // max -x1 + x2, x1 <= 0, x2 free, x1 + x2 = 1, x2 <= 3.
        let mut lp = LinProgram::new(v(&[-1, 1])).with_bounds(vec![VarBound::NonPos, VarBound::Free]);
        lp.constrain(v(&[1, 1]), Relation::Eq, int(1));
        lp.constrain(v(&[0, 1]), Relation::Le, int(3));
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.value(), Some(&int(5)));
        assert_eq!(r.point(), Some(&v(&[-2, 3])));
        assert!(verify_certificate(&lp, &r));
    }

    #[test]
    fn degenerate_cycling_instance_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        use crate::rational::ratio;
        let obj = Vector::new(vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)]);
        let mut lp = LinProgram::new(obj).with_bounds(vec![VarBound::NonNeg; 4]);
        lp.constrain(
            Vector::new(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)]),
            Relation::Le,
            int(0),
        );
        lp.constrain(
            Vector::new(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)]),
            Relation::Le,
            int(0),
        );
        lp.constrain(v(&[0, 0, 1, 0]), Relation::Le, int(1));
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.value(), Some(&ratio(1, 20)));
        assert!(verify_certificate(&lp, &r));
    }

    #[test]
    fn malformed_program() {
        let mut lp = LinProgram::new(v(&[1, 1]));
        lp.constrain(v(&[1]), Relation::Le, int(1));
        assert!(matches!(solve_lp(&lp), Err(Error::DimensionMismatch { .. })));
    }
}

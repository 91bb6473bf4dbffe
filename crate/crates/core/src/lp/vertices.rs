//! Vertex enumeration of bounded polyhedra by exhaustive basis enumeration.

use std::collections::BTreeSet;

use itertools::Itertools;
use num::{Signed, Zero};

use super::{solve_lp, LinProgram, LpResult, Relation};
use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::linalg;
use crate::rational::Rational;

/// `{μ : row·μ <= rhs for (row, rhs) in rows, row·μ = rhs for eq_rows}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub dim: usize,
    pub rows: Vec<(Vector, Rational)>,
    pub eq_rows: Vec<(Vector, Rational)>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Polytope {
            dim,
            rows: Vec::new(),
            eq_rows: Vec::new(),
        }
    }

    /// `{z >= 0 : M z = b}` with `M` given by rows.
    pub fn standard(dim: usize, eq_rows: Vec<(Vector, Rational)>) -> Self {
        let rows = (0..dim)
            .map(|j| (-&Vector::unit(dim, j), Rational::zero()))
            .collect();
        Polytope { dim, rows, eq_rows }
    }

    pub fn add_le(&mut self, row: Vector, rhs: Rational) {
        self.rows.push((row, rhs));
    }

    pub fn add_eq(&mut self, row: Vector, rhs: Rational) {
        self.eq_rows.push((row, rhs));
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.rows.iter().all(|(r, b)| r.dot(x) <= *b)
            && self.eq_rows.iter().all(|(r, b)| r.dot(x) == *b)
    }

    fn validate(&self) -> Result<()> {
        for (r, _) in self.rows.iter().chain(&self.eq_rows) {
            Error::check_dim(self.dim, r.len())?;
        }
        Ok(())
    }

    /// True when the inequality rows are exactly `-z_j <= 0` for every `j`.
    fn is_standard_form(&self) -> bool {
        if self.rows.len() != self.dim {
            return false;
        }
        let mut seen = vec![false; self.dim];
        for (r, b) in &self.rows {
            if !b.is_zero() {
                return false;
            }
            let support = r.support();
            if support.len() != 1 || r[support[0]] != -Rational::from_integer(1.into()) {
                return false;
            }
            if std::mem::replace(&mut seen[support[0]], true) {
                return false;
            }
        }
        true
    }

    fn lp_base(&self, objective: Vector) -> LinProgram {
        let mut lp = LinProgram::new(objective);
        for (r, b) in &self.rows {
            lp.constrain(r.clone(), Relation::Le, b.clone());
        }
        for (r, b) in &self.eq_rows {
            lp.constrain(r.clone(), Relation::Eq, b.clone());
        }
        lp
    }
}

/// Size limits for [`enumerate_vertices_with`].
///
/// For the general path `max_vars` bounds the dimension and `max_rows` the
/// inequality count. For standard-form polytopes `{z >= 0, M z = b}` the
/// basis size (rank of `M`) is bounded by `max_vars` and the column count by
/// `max_rows`. `max_subsystems` caps the number of square systems solved.
#[derive(Clone, Copy, Debug)]
pub struct VertexLimits {
    pub max_vars: usize,
    pub max_rows: usize,
    pub max_subsystems: u128,
}

impl Default for VertexLimits {
    fn default() -> Self {
        VertexLimits {
            max_vars: 12,
            max_rows: 64,
            max_subsystems: 2_000_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn enumerate_vertices(p: &Polytope) -> Result<Vec<Vector>> {
    enumerate_vertices_with(p, VertexLimits::default())
}

/// The exact vertex set of a bounded polytope, sorted and deduplicated.
/// Returns an empty list for an empty polytope.
pub fn enumerate_vertices_with(p: &Polytope, limits: VertexLimits) -> Result<Vec<Vector>> {
    p.validate()?;
    if p.is_standard_form() {
        standard_vertices(p, limits)
    } else {
        general_vertices(p, limits)
    }
}

fn standard_vertices(p: &Polytope, limits: VertexLimits) -> Result<Vec<Vector>> {
    let n = p.dim;
    if n > limits.max_rows {
        return Err(Error::SizeBound(format!(
            "{n} columns exceeds the limit of {}",
            limits.max_rows
        )));
    }
    let mut m: Vec<Vec<Rational>> = p
        .eq_rows
        .iter()
        .map(|(r, b)| {
            let mut row = r.entries().to_vec();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = linalg::rref(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(Vec::new());
    }
    let rank = pivots.len();
    if rank > limits.max_vars {
        return Err(Error::SizeBound(format!(
            "basis size {rank} exceeds the limit of {}",
            limits.max_vars
        )));
    }
    let count = binomial(n, rank);
    if count > limits.max_subsystems {
        return Err(Error::SizeBound(format!("{count} candidate bases")));
    }
    m.truncate(rank);
    // Recession cone of {z >= 0, Mz = b} is {d >= 0, Md = 0}; bounded iff it
    // is trivial, i.e. max Σd over {d >= 0, Md = 0, Σd <= 1} is zero.
    {
        let mut lp = LinProgram::new(Vector::ones(n))
            .with_bounds(vec![super::VarBound::NonNeg; n]);
        for row in &m {
            lp.constrain(Vector::new(row[..n].to_vec()), Relation::Eq, Rational::zero());
        }
        lp.constrain(Vector::ones(n), Relation::Le, Rational::from_integer(1.into()));
        match solve_lp(&lp)? {
            LpResult::Optimal { value, .. } if value.is_zero() => {}
            _ => return Err(Error::UnboundedPolytope),
        }
    }
    let rhs: Vec<Rational> = m.iter().map(|row| row[n].clone()).collect();
    let mut out = BTreeSet::new();
    for cols in (0..n).combinations(rank) {
        let square: Vec<Vector> = (0..rank)
            .map(|i| cols.iter().map(|&c| m[i][c].clone()).collect())
            .collect();
        let Some(zb) = linalg::solve_square(&square, &rhs) else {
            continue;
        };
        if zb.iter().any(Signed::is_negative) {
            continue;
        }
        let mut z = vec![Rational::zero(); n];
        for (&c, v) in cols.iter().zip(zb.into_entries()) {
            z[c] = v;
        }
        out.insert(Vector::new(z));
    }
    Ok(out.into_iter().collect())
}

fn general_vertices(p: &Polytope, limits: VertexLimits) -> Result<Vec<Vector>> {
    let n = p.dim;
    if n > limits.max_vars || p.rows.len() > limits.max_rows {
        return Err(Error::SizeBound(format!(
            "{n} variables / {} rows exceeds the limit of {} / {}",
            p.rows.len(),
            limits.max_vars,
            limits.max_rows
        )));
    }
    // Parametrise the equality set as z0 + N t.
    let eq_a: Vec<Vector> = p.eq_rows.iter().map(|(r, _)| r.clone()).collect();
    let eq_b: Vec<Rational> = p.eq_rows.iter().map(|(_, b)| b.clone()).collect();
    let Some(z0) = linalg::solve_rows(&eq_a, &eq_b, n) else {
        return Ok(Vec::new());
    };
    let null = linalg::nullspace(&eq_a, n);
    let k = null.len();
    let count = binomial(p.rows.len(), k);
    if count > limits.max_subsystems {
        return Err(Error::SizeBound(format!("{count} candidate subsystems")));
    }
    // Boundedness: every coordinate bounded above and below.
    let feasible = match solve_lp(&p.lp_base(Vector::zeros(n)))? {
        LpResult::Optimal { .. } => true,
        LpResult::Infeasible { .. } => false,
        LpResult::Unbounded { .. } => unreachable!("zero objective"),
    };
    if !feasible {
        return Ok(Vec::new());
    }
    for j in 0..n {
        for dir in [Vector::unit(n, j), -&Vector::unit(n, j)] {
            if let LpResult::Unbounded { .. } = solve_lp(&p.lp_base(dir))? {
                return Err(Error::UnboundedPolytope);
            }
        }
    }
    let reduced: Vec<(Vector, Rational)> = p
        .rows
        .iter()
        .map(|(r, b)| {
            let row: Vector = null.iter().map(|u| r.dot(u)).collect();
            (row, b - r.dot(&z0))
        })
        .collect();
    let mut out = BTreeSet::new();
    if k == 0 {
        if p.contains(&z0) {
            out.insert(z0);
        }
        return Ok(out.into_iter().collect());
    }
    for active in (0..reduced.len()).combinations(k) {
        let a: Vec<Vector> = active.iter().map(|&i| reduced[i].0.clone()).collect();
        let b: Vec<Rational> = active.iter().map(|&i| reduced[i].1.clone()).collect();
        let Some(t) = linalg::solve_square(&a, &b) else {
            continue;
        };
        if reduced.iter().all(|(r, b)| r.dot(&t) <= *b) {
            let z = &z0 + &crate::lattice::combine(n, &null, t.entries());
            out.insert(z);
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn boxed(hi: &[i64]) -> Polytope {
        let n = hi.len();
        let mut p = Polytope::new(n);
        for (j, &h) in hi.iter().enumerate() {
            p.add_le(-&Vector::unit(n, j), int(0));
            p.add_le(Vector::unit(n, j), int(h));
        }
        p
    }

    #[test]
    fn unit_square() {
        let verts = enumerate_vertices(&boxed(&[1, 1])).unwrap();
        assert_eq!(verts, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn simplex() {
        let mut p = Polytope::new(2);
        p.add_le(v(&[-1, 0]), int(0));
        p.add_le(v(&[0, -1]), int(0));
        p.add_le(v(&[1, 1]), int(1));
        let verts = enumerate_vertices(&p).unwrap();
        assert_eq!(verts, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn clipped_box() {
        let mut p = boxed(&[1, 2]);
        p.add_le(v(&[1, 1]), int(2));
        let verts = enumerate_vertices(&p).unwrap();
        assert_eq!(verts, vec![v(&[0, 0]), v(&[0, 2]), v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn standard_form_simplex() {
        let p = Polytope::standard(3, vec![(v(&[1, 1, 1]), int(1))]);
        let verts = enumerate_vertices(&p).unwrap();
        assert_eq!(verts, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
    }

    #[test]
    fn equality_rows_in_general_form() {
        // The segment {x1 + x2 = 1} inside the unit square.
        let mut p = boxed(&[1, 1]);
        p.add_eq(v(&[1, 1]), int(1));
        let verts = enumerate_vertices(&p).unwrap();
        assert_eq!(verts, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn unbounded_and_empty() {
        let mut p = Polytope::new(1);
        p.add_le(v(&[-1]), int(0));
        assert_eq!(enumerate_vertices(&p), Err(Error::UnboundedPolytope));
        let mut q = boxed(&[1]);
        q.add_le(v(&[-1]), int(-2));
        assert_eq!(enumerate_vertices(&q).unwrap(), Vec::<Vector>::new());
        let s = Polytope::standard(2, vec![(v(&[1, -1]), int(0))]);
        assert_eq!(enumerate_vertices(&s), Err(Error::UnboundedPolytope));
    }

    #[test]
    fn size_bound() {
        let p = boxed(&[1; 13]);
        assert!(matches!(enumerate_vertices(&p), Err(Error::SizeBound(_))));
    }
}

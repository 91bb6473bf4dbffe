//! Finite-dimensional vector lattices `Q^n` under the coordinatewise order.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{solve_lp, LinProgram, LpResult, Relation, VarBound};
use crate::rational::{self, Rational};

/// A point of `Q^n`. Equality is exact entrywise equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Vector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![Rational::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        Vector(vec![rational::one(); n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    fn same_len(&self, other: &Vector) -> Result<()> {
        Error::check_dim(self.len(), other.len())
    }

    fn zip_with(&self, other: &Vector, f: impl Fn(&Rational, &Rational) -> Rational) -> Vector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Vector {
        Vector(self.0.iter().map(f).collect())
    }

    /// Inner product. Panics on a length mismatch.
    pub fn dot(&self, other: &Vector) -> Rational {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        self.map(|a| a * s)
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Vector) -> Vector {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    /// Coordinates with a nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| !self.0[k].is_zero()).collect()
    }

    pub fn meet(&self, other: &Vector) -> Result<Vector> {
        self.same_len(other)?;
        Ok(self.zip_with(other, |a, b| rational::min(a, b).clone()))
    }

    pub fn join(&self, other: &Vector) -> Result<Vector> {
        self.same_len(other)?;
        Ok(self.zip_with(other, |a, b| rational::max(a, b).clone()))
    }

    /// `x+ = x ∨ 0`.
    pub fn pos_part(&self) -> Vector {
        self.map(rational::pos)
    }

    /// `x- = (-x) ∨ 0`.
    pub fn neg_part(&self) -> Vector {
        self.map(|a| rational::pos(&-a))
    }

    /// `|x| = x+ + x-`.
    pub fn abs_val(&self) -> Vector {
        self.map(|a| a.abs())
    }

    pub fn partial_leq(&self, other: &Vector) -> Result<bool> {
        self.same_len(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// `|x| ∧ |y| = 0`.
    pub fn is_disjoint(&self, other: &Vector) -> Result<bool> {
        Ok(self.abs_val().meet(&other.abs_val())?.is_zero())
    }
}

impl Index<usize> for Vector {
    type Output = Rational;
    fn index(&self, k: usize) -> &Rational {
        &self.0[k]
    }
}

impl From<Vec<Rational>> for Vector {
    fn from(v: Vec<Rational>) -> Self {
        Vector(v)
    }
}

impl FromIterator<Rational> for Vector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Vector {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.map(|a| -a)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Linear combination `Σ coeffs[i] · vectors[i]` in `Q^dim`.
pub fn combine(dim: usize, vectors: &[Vector], coeffs: &[Rational]) -> Vector {
    let mut out = Vector::zeros(dim);
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, a) in out.0.iter_mut().zip(&v.0) {
            *o += a * c;
        }
    }
    out
}

/// A coordinate ideal `{x : x_k = 0 for k ∉ coords}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    dim: usize,
    coords: Vec<usize>,
}

impl IdealSpec {
    pub fn new(dim: usize, coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut coords: Vec<usize> = coords.into_iter().collect();
        coords.sort_unstable();
        coords.dedup();
        if let Some(&k) = coords.iter().find(|&&k| k >= dim) {
            return Err(Error::Invalid(format!(
                "ideal coordinate {k} out of range for dimension {dim}"
            )));
        }
        Ok(IdealSpec { dim, coords })
    }

    pub fn full(dim: usize) -> Self {
        IdealSpec {
            dim,
            coords: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn contains_coord(&self, k: usize) -> bool {
        self.coords.binary_search(&k).is_ok()
    }

    /// The disjoint complement `A^d`.
    pub fn complement(&self) -> IdealSpec {
        IdealSpec {
            dim: self.dim,
            coords: (0..self.dim).filter(|&k| !self.contains_coord(k)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &IdealSpec) -> bool {
        self.dim == other.dim && self.coords.iter().all(|&k| other.contains_coord(k))
    }

    /// 0/1 indicator of the coordinates.
    pub fn mask(&self) -> Vector {
        (0..self.dim)
            .map(|k| {
                if self.contains_coord(k) {
                    rational::one()
                } else {
                    rational::zero()
                }
            })
            .collect()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.len() == self.dim && (0..self.dim).all(|k| self.contains_coord(k) || x[k].is_zero())
    }

    /// The ideal as a subspace with the unit vectors as basis.
    pub fn as_subspace(&self) -> SubspaceSpec {
        SubspaceSpec {
            dim: self.dim,
            basis: self
                .coords
                .iter()
                .map(|&k| Vector::unit(self.dim, k))
                .collect(),
        }
    }
}

/// Keeps the entries of `x` on `a.coords` and zeroes the rest. For `x >= 0`
/// this is the greatest element of `{y ∈ A : 0 <= y <= x}`.
pub fn ideal_project(a: &IdealSpec, x: &Vector) -> Result<Vector> {
    Error::check_dim(a.dim, x.len())?;
    Ok(x.hadamard(&a.mask()))
}

/// A linear subspace given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSpec {
    dim: usize,
    basis: Vec<Vector>,
}

impl SubspaceSpec {
    pub fn new(dim: usize, basis: Vec<Vector>) -> Result<Self> {
        for b in &basis {
            Error::check_dim(dim, b.len())?;
        }
        if linalg::rank(&basis) != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(SubspaceSpec { dim, basis })
    }

    pub fn full(dim: usize) -> Self {
        SubspaceSpec {
            dim,
            basis: (0..dim).map(|k| Vector::unit(dim, k)).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        SubspaceSpec {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Coordinates of `x` in the basis, if `x` lies in the subspace.
    pub fn coordinates(&self, x: &Vector) -> Option<Vector> {
        if x.len() != self.dim {
            return None;
        }
        linalg::solve_columns(&self.basis, x, self.dim)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn point(&self, coeffs: &[Rational]) -> Vector {
        combine(self.dim, &self.basis, coeffs)
    }

    pub fn as_cone(&self) -> ConeDomain {
        ConeDomain {
            dim: self.dim,
            linear_basis: self.basis.clone(),
            rays: Vec::new(),
        }
    }
}

/// `{B·w + R·t : w free, t >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDomain {
    dim: usize,
    linear_basis: Vec<Vector>,
    rays: Vec<Vector>,
}

impl ConeDomain {
    pub fn new(dim: usize, linear_basis: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        for v in linear_basis.iter().chain(&rays) {
            Error::check_dim(dim, v.len())?;
        }
        if linalg::rank(&linear_basis) != linear_basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(ConeDomain {
            dim,
            linear_basis,
            rays,
        })
    }

    /// The positive cone `E+`.
    pub fn positive_orthant(dim: usize) -> Self {
        ConeDomain {
            dim,
            linear_basis: Vec::new(),
            rays: (0..dim).map(|k| Vector::unit(dim, k)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn linear_basis(&self) -> &[Vector] {
        &self.linear_basis
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn is_subspace(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn point(&self, w: &[Rational], t: &[Rational]) -> Vector {
        let a = combine(self.dim, &self.linear_basis, w);
        let b = combine(self.dim, &self.rays, t);
        &a + &b
    }
}

/// Exact membership test `∃ w free, t >= 0 : B·w + R·t = x`.
pub fn cone_contains(c: &ConeDomain, x: &Vector) -> Result<bool> {
    Error::check_dim(c.dim, x.len())?;
    let nb = c.linear_basis.len();
    let nr = c.rays.len();
    let mut bounds = vec![VarBound::Free; nb];
    bounds.extend(vec![VarBound::NonNeg; nr]);
    let mut lp = LinProgram::new(Vector::zeros(nb + nr)).with_bounds(bounds);
    for k in 0..c.dim {
        let row: Vector = c
            .linear_basis
            .iter()
            .chain(&c.rays)
            .map(|v| v[k].clone())
            .collect();
        lp.constrain(row, Relation::Eq, x[k].clone());
    }
    Ok(matches!(solve_lp(&lp)?, LpResult::Optimal { .. }))
}

/// Decides whether `G` majorizes `Q^n`, returning `y ∈ G` with `y >= (1,…,1)`
/// when it does.
///
/// If such a `y` exists then `max(0, max_k x_k)·y` dominates any `x`;
/// conversely the all-ones vector itself must be dominated.
pub fn is_majorizing(g: &SubspaceSpec) -> Result<Option<Vector>> {
    let r = g.rank();
    let mut lp = LinProgram::new(Vector::zeros(r));
    for k in 0..g.dim {
        let row: Vector = g.basis.iter().map(|b| b[k].clone()).collect();
        lp.constrain(row, Relation::Ge, rational::one());
    }
    Ok(match solve_lp(&lp)? {
        LpResult::Optimal { point, .. } => Some(g.point(point.entries())),
        _ => None,
    })
}

/// Largest dimension accepted by [`is_riesz_subspace`].
pub const RIESZ_DIM_BOUND: usize = 12;

/// Decides whether `G` is closed under `∨`, returning a pair `(x, y)` of
/// points of `G` with `x ∨ y ∉ G` when it is not.
///
/// Since `x ∨ y = y + (x - y)+`, closure under `∨` is closure under the
/// positive part. Writing `d = B·u`, the sign pattern of `d` splits the
/// parameter space into polyhedral cells on which `d+` is the linear map
/// `mask_S · B · u`; the test checks that map on a basis of the span of every
/// nonempty cell.
pub fn is_riesz_subspace(g: &SubspaceSpec) -> Result<Option<(Vector, Vector)>> {
    let n = g.dim;
    if n > RIESZ_DIM_BOUND {
        return Err(Error::SizeBound(format!(
            "Riesz-subspace test limited to dimension {RIESZ_DIM_BOUND}, got {n}"
        )));
    }
    let r = g.rank();
    if r == 0 {
        return Ok(None);
    }
    let rows: Vec<Vector> = (0..n)
        .map(|k| g.basis.iter().map(|b| b[k].clone()).collect())
        .collect();
    for pattern in 0u32..(1u32 << n) {
        let signs: Vec<Rational> = (0..n)
            .map(|k| {
                if pattern & (1 << k) != 0 {
                    rational::one()
                } else {
                    -rational::one()
                }
            })
            .collect();
        // Maximise Σ s_k subject to sign_k · (B u)_k >= s_k, 0 <= s <= 1.
        // Rows whose s_k is forced to zero are the implicit equalities.
        let mut objective = vec![rational::zero(); r];
        objective.extend(vec![rational::one(); n]);
        let mut bounds = vec![VarBound::Free; r];
        bounds.extend(vec![VarBound::NonNeg; n]);
        let mut lp = LinProgram::new(Vector::new(objective)).with_bounds(bounds);
        for k in 0..n {
            let mut row: Vec<Rational> = rows[k].iter().map(|a| a * &signs[k]).collect();
            row.extend((0..n).map(|j| if j == k { -rational::one() } else { rational::zero() }));
            lp.constrain(Vector::new(row), Relation::Ge, rational::zero());
            lp.constrain(Vector::unit(r + n, r + k), Relation::Le, rational::one());
        }
        let (open_rows, interior) = match solve_lp(&lp)? {
            LpResult::Optimal { point, .. } => {
                let s = &point.entries()[r..];
                let free: Vec<usize> = (0..n).filter(|&k| s[k].is_positive()).collect();
                (free, Vector::new(point.entries()[..r].to_vec()))
            }
            other => {
                return Err(Error::Internal(format!(
                    "cell LP did not reach an optimum: {:?}",
                    other.status()
                )))
            }
        };
        let implicit: Vec<Vector> = (0..n)
            .filter(|k| !open_rows.contains(k))
            .map(|k| rows[k].clone())
            .collect();
        let span = linalg::nullspace(&implicit, r);
        if span.is_empty() {
            continue;
        }
        let image = |u: &Vector| -> Vector {
            let d = combine(n, &g.basis, u.entries());
            d.pos_part()
        };
        for u in &span {
            // The positive-part map is linear on the cell, so on its span it is
            // the masked image; the mask is the pattern's nonnegative set.
            let masked: Vector = {
                let d = combine(n, &g.basis, u.entries());
                (0..n)
                    .map(|k| {
                        if signs[k].is_positive() {
                            d[k].clone()
                        } else {
                            rational::zero()
                        }
                    })
                    .collect()
            };
            if g.contains(&masked) {
                continue;
            }
            // Build a witness inside the cell: the relative-interior point
            // `interior` or a small step from it along `u`.
            let d0 = combine(n, &g.basis, interior.entries());
            if !g.contains(&image(&interior)) {
                return Ok(Some((d0, Vector::zeros(n))));
            }
            let du = combine(n, &g.basis, u.entries());
            let mut eps = rational::one();
            for k in 0..n {
                if !du[k].is_zero() && !d0[k].is_zero() {
                    let bound = (d0[k].abs() / du[k].abs()) / rational::int(2);
                    if bound < eps {
                        eps = bound;
                    }
                }
            }
            let moved: Vector = interior
                .iter()
                .zip(u)
                .map(|(a, b)| a + b * &eps)
                .collect();
            let x = combine(n, &g.basis, moved.entries());
            if !g.contains(&x.pos_part()) {
                return Ok(Some((x, Vector::zeros(n))));
            }
            return Err(Error::Internal(
                "Riesz test found a failing cell but no witness".into(),
            ));
        }
    }
    Ok(None)
}

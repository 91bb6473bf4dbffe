//! Linear-program encodings of operator epigraphs and domains.

use num::Zero;

use crate::lattice::{ConeDomain, SubspaceSpec, Vector};
use crate::lp::{LinProgram, Relation, VarBound};
use crate::ops::{Form, Region};
use crate::rational::Rational;

/// `Σ coef · var + constant`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Affine {
    terms: Vec<(usize, Rational)>,
    constant: Rational,
}

impl Affine {
    pub fn var(i: usize) -> Self {
        Affine {
            terms: vec![(i, Rational::from_integer(1.into()))],
            constant: Rational::zero(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Affine {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn add_term(&mut self, i: usize, c: Rational) {
        if !c.is_zero() {
            self.terms.push((i, c));
        }
    }

    pub fn add_scaled(&mut self, other: &Affine, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (i, c) in &other.terms {
            self.terms.push((*i, c * s));
        }
        self.constant += &other.constant * s;
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::from_integer(1.into()));
        out
    }

    pub fn eval(&self, point: &Vector) -> Rational {
        let mut acc = self.constant.clone();
        for (i, c) in &self.terms {
            acc += c * &point[*i];
        }
        acc
    }
}

/// `a · args` as an affine expression.
pub(crate) fn dot(a: &Vector, args: &[Affine]) -> Affine {
    let mut out = Affine::default();
    for (ai, arg) in a.iter().zip(args) {
        out.add_scaled(arg, ai);
    }
    out
}

pub(crate) fn eval_point(args: &[Affine], point: &Vector) -> Vector {
    args.iter().map(|a| a.eval(point)).collect()
}

/// Accumulates variables and rows, then emits a dense [`LinProgram`].
#[derive(Default)]
pub(crate) struct LpBuilder {
    bounds: Vec<VarBound>,
    rows: Vec<(Affine, Relation)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, bound: VarBound) -> usize {
        self.bounds.push(bound);
        self.bounds.len() - 1
    }

    pub fn vars(&mut self, k: usize, bound: VarBound) -> Vec<usize> {
        (0..k).map(|_| self.var(bound)).collect()
    }

    /// `expr (relation) 0`.
    pub fn constrain(&mut self, expr: Affine, relation: Relation) {
        self.rows.push((expr, relation));
    }

    pub fn ge(&mut self, lhs: &Affine, rhs: &Affine) {
        self.constrain(lhs.sub(rhs), Relation::Ge);
    }

    pub fn build(&self, objective: &Affine) -> LinProgram {
        let n = self.bounds.len();
        let dense = |a: &Affine| -> Vector {
            let mut v = vec![Rational::zero(); n];
            for (i, c) in &a.terms {
                v[*i] += c;
            }
            Vector::new(v)
        };
        let mut lp = LinProgram::new(dense(objective)).with_bounds(self.bounds.clone());
        for (a, rel) in &self.rows {
            lp.constrain(dense(a), *rel, -a.constant.clone());
        }
        lp
    }

    /// Free variable `v` with `v >= form_k(arg)`.
    ///
    /// A positive-part form `a·arg+` (with `a >= 0`) uses auxiliary
    /// variables `w >= arg`, `w >= 0` and `v >= a·w`.
    pub fn epigraph(&mut self, form: &Form, k: usize, arg: &[Affine]) -> usize {
        let v = self.var(VarBound::Free);
        let vv = Affine::var(v);
        match form {
            Form::MaxLin(t) => {
                for a in t.component(k) {
                    self.ge(&vv, &dot(a, arg));
                }
            }
            Form::PosPart(p) => {
                let w = self.vars(arg.len(), VarBound::NonNeg);
                let w_aff: Vec<Affine> = w.iter().map(|&i| Affine::var(i)).collect();
                for (wi, ai) in w_aff.iter().zip(arg) {
                    self.ge(wi, ai);
                }
                for a in p.inner().component(k) {
                    self.ge(&vv, &dot(a, &w_aff));
                }
            }
        }
        v
    }

    /// Fresh variables ranging over the region; returns the point's
    /// coordinates.
    pub fn region_point(&mut self, region: &Region) -> Vec<Affine> {
        match region {
            Region::Cone(c) => self.cone_point(c),
            Region::PositiveSubspace(g) => {
                let u = self.subspace_point(g);
                for ui in &u {
                    self.constrain(ui.clone(), Relation::Ge);
                }
                u
            }
        }
    }

    pub fn subspace_point(&mut self, g: &SubspaceSpec) -> Vec<Affine> {
        let w = self.vars(g.rank(), VarBound::Free);
        linear_image(g.dim(), g.basis(), &w)
    }

    pub fn cone_point(&mut self, c: &ConeDomain) -> Vec<Affine> {
        let w = self.vars(c.linear_basis().len(), VarBound::Free);
        let t = self.vars(c.rays().len(), VarBound::NonNeg);
        let mut u = linear_image(c.dim(), c.linear_basis(), &w);
        let r = linear_image(c.dim(), c.rays(), &t);
        for (ui, ri) in u.iter_mut().zip(&r) {
            ui.add_scaled(ri, &Rational::from_integer(1.into()));
        }
        u
    }
}

/// Coordinates of `Σ vars[i] · vectors[i]`.
pub(crate) fn linear_image(dim: usize, vectors: &[Vector], vars: &[usize]) -> Vec<Affine> {
    (0..dim)
        .map(|k| {
            let mut a = Affine::default();
            for (v, &i) in vectors.iter().zip(vars) {
                a.add_term(i, v[k].clone());
            }
            a
        })
        .collect()
}

pub(crate) fn constant_point(x: &Vector) -> Vec<Affine> {
    x.iter().map(|c| Affine::constant(c.clone())).collect()
}

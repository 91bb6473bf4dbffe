//! Sublinear operator representations and their exact property checks.
//!
//! A [`MaxLinOperator`] `T: Q^n -> Q^m` evaluates component `k` as the
//! maximum of `a·x` over its generators `a`; it is subadditive and
//! positively homogeneous by construction. A [`PosPartForm`] evaluates an
//! inner operator with nonnegative generators at `x+`.
//!
//! All vector-valued questions are answered componentwise, which is exact
//! for the coordinatewise order on `Q^m`.

pub(crate) mod encode;

use std::collections::BTreeSet;

use itertools::Itertools;
use num::Signed;

use crate::error::{Error, Result};
use crate::lattice::{ConeDomain, SubspaceSpec, Vector};
use crate::lp::{solve_lp, LpResult, Relation, VarBound};
use crate::rational::{self, Rational};
use encode::{dot, eval_point, Affine, LpBuilder};

/// Outcome of a decision procedure: the property holds, or it fails with a
/// witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<W = Vector> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxLinOperator {
    in_dim: usize,
    components: Vec<Vec<Vector>>,
}

impl MaxLinOperator {
    pub fn new(in_dim: usize, components: Vec<Vec<Vector>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("operator needs at least one component".into()));
        }
        for (k, gens) in components.iter().enumerate() {
            if gens.is_empty() {
                return Err(Error::Invalid(format!("component {k} has no generators")));
            }
            for g in gens {
                Error::check_dim(in_dim, g.len())?;
            }
        }
        Ok(MaxLinOperator { in_dim, components })
    }

    /// A single-component operator `x -> max_a a·x`.
    pub fn scalar(in_dim: usize, gens: Vec<Vector>) -> Result<Self> {
        Self::new(in_dim, vec![gens])
    }

    /// The linear operator with the given rows.
    pub fn linear(in_dim: usize, rows: Vec<Vector>) -> Result<Self> {
        Self::new(in_dim, rows.into_iter().map(|r| vec![r]).collect())
    }

    pub fn zero(in_dim: usize, out_dim: usize) -> Self {
        MaxLinOperator {
            in_dim,
            components: vec![vec![Vector::zeros(in_dim)]; out_dim],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, k: usize) -> &[Vector] {
        &self.components[k]
    }

    pub fn components(&self) -> &[Vec<Vector>] {
        &self.components
    }

    pub fn eval_component(&self, k: usize, x: &Vector) -> Rational {
        self.components[k]
            .iter()
            .map(|a| a.dot(x))
            .max()
            .expect("nonempty component")
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Vector> {
        Error::check_dim(self.in_dim, x.len())?;
        Ok((0..self.out_dim()).map(|k| self.eval_component(k, x)).collect())
    }

    /// True iff every generator entry is nonnegative.
    pub fn has_nonneg_generators(&self) -> bool {
        self.components.iter().flatten().all(Vector::is_nonneg)
    }

    /// Sorts and deduplicates the generators of each component.
    pub fn dedup(mut self) -> Self {
        for gens in &mut self.components {
            let set: BTreeSet<Vector> = gens.drain(..).collect();
            gens.extend(set);
        }
        self
    }

    /// Removes generators lying in the convex hull of the remaining ones.
    /// The operator is unchanged pointwise.
    pub fn prune(&self) -> Result<Self> {
        let mut out = self.clone().dedup();
        for gens in &mut out.components {
            let mut i = 0;
            while i < gens.len() && gens.len() > 1 {
                let others: Vec<Vector> = gens
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                if in_convex_hull(&gens[i], &others)? {
                    gens.remove(i);
                } else {
                    i += 1;
                }
            }
        }
        Ok(out)
    }

    /// Pointwise sum `x -> self(x) + other(x)`, generators summed pairwise.
    pub fn sum(&self, other: &MaxLinOperator) -> Result<MaxLinOperator> {
        Error::check_dim(self.in_dim, other.in_dim)?;
        Error::check_dim(self.out_dim(), other.out_dim())?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                a.iter()
                    .cartesian_product(b)
                    .map(|(x, y)| x + y)
                    .collect()
            })
            .collect();
        Ok(MaxLinOperator::new(self.in_dim, components)?.dedup())
    }

    /// `x -> self(L x)` for a linear map `L: Q^d -> Q^n` given by its `n`
    /// rows (each of length `d`).
    pub fn compose_linear(&self, rows: &[Vector], d: usize) -> Result<MaxLinOperator> {
        Error::check_dim(self.in_dim, rows.len())?;
        let components = self
            .components
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|a| crate::lattice::combine(d, rows, a.entries()))
                    .collect()
            })
            .collect();
        Ok(MaxLinOperator::new(d, components)?.dedup())
    }
}

fn in_convex_hull(x: &Vector, points: &[Vector]) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let n = x.len();
    let k = points.len();
    let mut lp = crate::lp::LinProgram::new(Vector::zeros(k)).with_bounds(vec![VarBound::NonNeg; k]);
    for i in 0..n {
        let row: Vector = points.iter().map(|p| p[i].clone()).collect();
        lp.constrain(row, Relation::Eq, x[i].clone());
    }
    lp.constrain(Vector::ones(k), Relation::Eq, rational::one());
    Ok(matches!(solve_lp(&lp)?, LpResult::Optimal { .. }))
}

/// `x -> T(x+)` for a monotone inner operator `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosPartForm {
    inner: MaxLinOperator,
}

impl PosPartForm {
    /// Rejects inner operators with a negative generator entry.
    pub fn new(inner: MaxLinOperator) -> Result<Self> {
        if let Verdict::Fails((lower, upper)) = is_monotone(&inner) {
            return Err(Error::NotMonotone { lower, upper });
        }
        Ok(PosPartForm { inner })
    }

    pub fn inner(&self) -> &MaxLinOperator {
        &self.inner
    }

    pub fn into_inner(self) -> MaxLinOperator {
        self.inner
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form {
    MaxLin(MaxLinOperator),
    PosPart(PosPartForm),
}

impl From<MaxLinOperator> for Form {
    fn from(t: MaxLinOperator) -> Self {
        Form::MaxLin(t)
    }
}

impl From<PosPartForm> for Form {
    fn from(p: PosPartForm) -> Self {
        Form::PosPart(p)
    }
}

impl Form {
    fn base(&self) -> &MaxLinOperator {
        match self {
            Form::MaxLin(t) => t,
            Form::PosPart(p) => &p.inner,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.base().in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.base().out_dim()
    }

    pub fn eval_component(&self, k: usize, x: &Vector) -> Rational {
        match self {
            Form::MaxLin(t) => t.eval_component(k, x),
            Form::PosPart(p) => p.inner.eval_component(k, &x.pos_part()),
        }
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Vector> {
        Error::check_dim(self.in_dim(), x.len())?;
        Ok((0..self.out_dim()).map(|k| self.eval_component(k, x)).collect())
    }

    /// The equivalent MaxLin representation (expanding a positive part).
    pub fn to_maxlin(&self) -> Result<MaxLinOperator> {
        match self {
            Form::MaxLin(t) => Ok(t.clone()),
            Form::PosPart(p) => expand_pospart(p),
        }
    }

    pub fn is_monotone(&self) -> Verdict<(Vector, Vector)> {
        match self {
            Form::MaxLin(t) => is_monotone(t),
            Form::PosPart(_) => Verdict::Holds,
        }
    }
}

/// An operator whose stated properties are asserted only on `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainedOperator {
    pub form: Form,
    pub domain: ConeDomain,
}

impl DomainedOperator {
    pub fn new(form: impl Into<Form>, domain: ConeDomain) -> Result<Self> {
        let form = form.into();
        Error::check_dim(form.in_dim(), domain.dim())?;
        Ok(DomainedOperator { form, domain })
    }

    pub fn on_subspace(form: impl Into<Form>, y: &SubspaceSpec) -> Result<Self> {
        Self::new(form, y.as_cone())
    }
}

/// A cone over which domination questions are decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    /// A finitely generated cone.
    Cone(ConeDomain),
    /// `G ∩ E+` for a subspace `G`.
    PositiveSubspace(SubspaceSpec),
}

impl Region {
    pub fn dim(&self) -> usize {
        match self {
            Region::Cone(c) => c.dim(),
            Region::PositiveSubspace(g) => g.dim(),
        }
    }
}

impl From<ConeDomain> for Region {
    fn from(c: ConeDomain) -> Self {
        Region::Cone(c)
    }
}

impl From<&SubspaceSpec> for Region {
    fn from(g: &SubspaceSpec) -> Self {
        Region::Cone(g.as_cone())
    }
}

pub fn evaluate(f: &Form, x: &Vector) -> Result<Vector> {
    f.evaluate(x)
}

/// Monotone iff every generator entry is nonnegative.
///
/// A generator `a` with `a_k < 0` gives `T(-e_k) >= -a_k > 0 = T(0)` while
/// `-e_k <= 0`. When every generator is negative at `k` the pair
/// `0 <= e_k` with `T(e_k) < 0` is reported instead.
pub fn is_monotone(t: &MaxLinOperator) -> Verdict<(Vector, Vector)> {
    let n = t.in_dim;
    for gens in &t.components {
        for a in gens {
            if let Some(k) = (0..n).find(|&k| a[k].is_negative()) {
                let e = Vector::unit(n, k);
                let all_negative = gens.iter().all(|g| g[k].is_negative());
                return if all_negative {
                    Verdict::Fails((Vector::zeros(n), e))
                } else {
                    Verdict::Fails((-&e, Vector::zeros(n)))
                };
            }
        }
    }
    Verdict::Holds
}

/// Decides monotonicity of `T` with respect to the order induced on `G`:
/// `T(y) <= T(y + g)` for `y ∈ G`, `g ∈ G ∩ E+`.
///
/// For each generator `a` of component `k`, feasibility of
/// `a·y - T_k(y + g) >= 1` exhibits a violation; by homogeneity the gap is
/// either zero or unbounded, so the test is exact.
pub fn is_monotone_on(t: &Form, g: &SubspaceSpec) -> Result<Verdict<(Vector, Vector)>> {
    Error::check_dim(t.in_dim(), g.dim())?;
    let expanded = t.to_maxlin()?;
    for k in 0..t.out_dim() {
        for a in expanded.component(k) {
            let mut b = LpBuilder::new();
            let y = b.subspace_point(g);
            let step = b.region_point(&Region::PositiveSubspace(g.clone()));
            let upper: Vec<Affine> = y
                .iter()
                .zip(&step)
                .map(|(p, q)| {
                    let mut s = p.clone();
                    s.add_scaled(q, &rational::one());
                    s
                })
                .collect();
            let v = b.epigraph(t, k, &upper);
            let mut gap = dot(a, &y).sub(&Affine::var(v));
            gap.add_scaled(&Affine::constant(rational::one()), &-rational::one());
            b.constrain(gap, Relation::Ge);
            let lp = b.build(&Affine::default());
            if let LpResult::Optimal { point, .. } = solve_lp(&lp)? {
                return Ok(Verdict::Fails((eval_point(&y, &point), eval_point(&upper, &point))));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Positivity on `E+`: the minimum of each component over the standard
/// simplex is nonnegative. Homogeneity extends the verdict to all of `E+`.
pub fn is_positive_on_positive_cone(f: &Form) -> Result<Verdict> {
    let n = f.in_dim();
    if n == 0 {
        return Ok(Verdict::Holds);
    }
    for k in 0..f.out_dim() {
        let mut b = LpBuilder::new();
        let x = b.vars(n, VarBound::NonNeg);
        let xa: Vec<Affine> = x.iter().map(|&i| Affine::var(i)).collect();
        let mut total = Affine::default();
        for xi in &xa {
            total.add_scaled(xi, &rational::one());
        }
        total.add_scaled(&Affine::constant(rational::one()), &-rational::one());
        b.constrain(total, Relation::Eq);
        let v = b.epigraph(f, k, &xa);
        let mut obj = Affine::default();
        obj.add_term(v, -rational::one());
        match solve_lp(&b.build(&obj))? {
            LpResult::Optimal { value, point, .. } => {
                if value.is_positive() {
                    return Ok(Verdict::Fails(eval_point(&xa, &point)));
                }
            }
            other => {
                return Err(Error::Internal(format!(
                    "simplex-minimum LP ended {:?}",
                    other.status()
                )))
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Minimum of each component over the standard simplex.
pub fn simplex_minimum(f: &Form) -> Result<Vector> {
    let n = f.in_dim();
    let mut out = Vec::with_capacity(f.out_dim());
    for k in 0..f.out_dim() {
        let mut b = LpBuilder::new();
        let x = b.vars(n, VarBound::NonNeg);
        let xa: Vec<Affine> = x.iter().map(|&i| Affine::var(i)).collect();
        let mut total = Affine::constant(-rational::one());
        for xi in &xa {
            total.add_scaled(xi, &rational::one());
        }
        b.constrain(total, Relation::Eq);
        let v = b.epigraph(f, k, &xa);
        let mut obj = Affine::default();
        obj.add_term(v, -rational::one());
        let r = solve_lp(&b.build(&obj))?;
        let value = r
            .value()
            .ok_or_else(|| Error::Internal("simplex-minimum LP has no optimum".into()))?;
        out.push(-value.clone());
    }
    Ok(Vector::new(out))
}

/// Decides `s(u) <= p(u)` componentwise for every `u` in the cone.
pub fn dominates_on(p: &Form, s: &Form, c: &ConeDomain) -> Result<Verdict> {
    dominates_on_region(p, s, &Region::Cone(c.clone()))
}

/// Decides `s(u) <= p(u)` componentwise on a region.
///
/// For each generator `a` of `s_k`, the system `u ∈ region`,
/// `v >= p_k(u)`, `a·u - v >= 1` is infeasible iff `a·u <= p_k(u)` on the
/// region; positive homogeneity makes the strict-gap test exact.
pub fn dominates_on_region(p: &Form, s: &Form, region: &Region) -> Result<Verdict> {
    Error::check_dim(p.in_dim(), s.in_dim())?;
    Error::check_dim(p.out_dim(), s.out_dim())?;
    Error::check_dim(p.in_dim(), region.dim())?;
    let s = s.to_maxlin()?;
    for k in 0..p.out_dim() {
        for a in s.component(k) {
            let mut b = LpBuilder::new();
            let u = b.region_point(region);
            let v = b.epigraph(p, k, &u);
            let mut gap = dot(a, &u).sub(&Affine::var(v));
            gap.add_scaled(&Affine::constant(rational::one()), &-rational::one());
            b.constrain(gap, Relation::Ge);
            if let LpResult::Optimal { point, .. } = solve_lp(&b.build(&Affine::default()))? {
                return Ok(Verdict::Fails(eval_point(&u, &point)));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Pointwise `λ s + (1 - λ) r` with generators `{λ a + (1 - λ) b}`.
pub fn affine_combine(s: &Form, r: &Form, lambda: &Rational) -> Result<MaxLinOperator> {
    if lambda.is_negative() || *lambda > rational::one() {
        return Err(Error::Invalid(format!("lambda {lambda} outside [0, 1]")));
    }
    Error::check_dim(s.in_dim(), r.in_dim())?;
    Error::check_dim(s.out_dim(), r.out_dim())?;
    let s = s.to_maxlin()?;
    let r = r.to_maxlin()?;
    let mu = rational::one() - lambda;
    let components = s
        .components
        .iter()
        .zip(&r.components)
        .map(|(sa, rb)| {
            sa.iter()
                .cartesian_product(rb)
                .map(|(a, b)| &a.scale(lambda) + &b.scale(&mu))
                .collect()
        })
        .collect();
    Ok(MaxLinOperator::new(s.in_dim, components)?.dedup())
}

/// Exact componentwise minimum and maximum of `f` over the box `[lo, hi]`.
pub fn order_bounds(f: &Form, lo: &Vector, hi: &Vector) -> Result<(Vector, Vector)> {
    let n = f.in_dim();
    Error::check_dim(n, lo.len())?;
    Error::check_dim(n, hi.len())?;
    if !lo.partial_leq(hi)? {
        return Err(Error::Invalid("box lower corner is not below the upper corner".into()));
    }
    let mut mins = Vec::with_capacity(f.out_dim());
    let mut maxs = Vec::with_capacity(f.out_dim());
    for k in 0..f.out_dim() {
        let gens = match f {
            Form::MaxLin(t) => t.component(k),
            Form::PosPart(p) => p.inner.component(k),
        };
        let max = gens
            .iter()
            .map(|a| match f {
                Form::MaxLin(_) => a
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(ai, (l, h))| rational::max(&(ai * l), &(ai * h)).clone())
                    .sum::<Rational>(),
                Form::PosPart(_) => a.dot(&hi.pos_part()),
            })
            .max()
            .expect("nonempty component");
        let mut b = LpBuilder::new();
        let x = b.vars(n, VarBound::Free);
        let xa: Vec<Affine> = x.iter().map(|&i| Affine::var(i)).collect();
        for (i, xi) in xa.iter().enumerate() {
            b.ge(xi, &Affine::constant(lo[i].clone()));
            b.ge(&Affine::constant(hi[i].clone()), xi);
        }
        let v = b.epigraph(f, k, &xa);
        let mut obj = Affine::default();
        obj.add_term(v, -rational::one());
        let value = solve_lp(&b.build(&obj))?
            .value()
            .cloned()
            .ok_or_else(|| Error::Internal("box minimum LP has no optimum".into()))?;
        mins.push(-value);
        maxs.push(max);
    }
    Ok((Vector::new(mins), Vector::new(maxs)))
}

/// Largest input dimension accepted by [`expand_pospart`].
pub const EXPANSION_BOUND: usize = 12;

/// The MaxLin representation of `x -> T(x+)`: generators `σ∘a` over all
/// 0/1 masks `σ`, using `a·x+ = max_σ (σ∘a)·x` for `a >= 0`.
pub fn expand_pospart(p: &PosPartForm) -> Result<MaxLinOperator> {
    let n = p.inner.in_dim;
    if n > EXPANSION_BOUND {
        return Err(Error::SizeBound(format!(
            "positive-part expansion limited to dimension {EXPANSION_BOUND}, got {n}"
        )));
    }
    let components = p
        .inner
        .components
        .iter()
        .map(|gens| {
            let mut out = BTreeSet::new();
            for a in gens {
                let support = a.support();
                for mask in 0u32..(1u32 << support.len()) {
                    let mut g = Vector::zeros(n).into_entries();
                    for (bit, &k) in support.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            g[k] = a[k].clone();
                        }
                    }
                    out.insert(Vector::new(g));
                }
            }
            out.into_iter().collect()
        })
        .collect();
    MaxLinOperator::new(n, components)
}

/// `f_k(x)` recomputed through the epigraph encoding.
#[cfg(test)]
pub(crate) fn epigraph_value(f: &Form, k: usize, x: &Vector) -> Result<Rational> {
    let mut b = LpBuilder::new();
    let v = b.epigraph(f, k, &encode::constant_point(x));
    let mut obj = Affine::default();
    obj.add_term(v, -rational::one());
    let r = solve_lp(&b.build(&obj))?;
    r.value()
        .map(|v| -v.clone())
        .ok_or_else(|| Error::Internal("epigraph LP has no optimum".into()))
}

impl MaxLinOperator {
    /// True iff every component has exactly one generator.
    pub fn is_linear(&self) -> bool {
        self.components.iter().all(|g| g.len() == 1)
    }
}

//! Membership in the set of monotone sublinear extensions, and the
//! sufficient extremality test `inf{S(|x - y|) : y ∈ G} = 0`.

use std::fmt;

use num::Zero;

use super::ProbeConfig;
use crate::error::{Error, Result};
use crate::lattice::{SubspaceSpec, Vector};
use crate::lp::{solve_lp, LpResult, VarBound};
use crate::ops::encode::{Affine, LpBuilder};
use crate::ops::{dominates_on, Form, Verdict};
use crate::rational;

/// Why a form is not a monotone sublinear extension.
#[derive(Clone, Debug, PartialEq)]
pub enum EsubFailure {
    /// `lower <= upper` but `S(lower) > S(upper)` in some component.
    NotMonotone { lower: Vector, upper: Vector },
    /// A point of `G` where `S` and `T` differ.
    Differs(Vector),
}

impl EsubFailure {
    /// The point to report: the upper end of a monotonicity violation or
    /// the point of disagreement.
    pub fn point(&self) -> Option<&Vector> {
        match self {
            EsubFailure::NotMonotone { upper, .. } => Some(upper),
            EsubFailure::Differs(x) => Some(x),
        }
    }
}

impl fmt::Display for EsubFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsubFailure::NotMonotone { lower, upper } => {
                write!(f, "not monotone between {lower} and {upper}")
            }
            EsubFailure::Differs(x) => write!(f, "differs from T at {x}"),
        }
    }
}

/// Decides whether `s` is monotone, sublinear and equal to `t` on `g`.
///
/// Equality is tested at the basis vectors and their negatives, at random
/// points of `g`, and then exactly by domination in both directions on
/// `g`.
pub fn is_in_esub(
    s: &Form,
    t: &Form,
    g: &SubspaceSpec,
    cfg: &ProbeConfig,
) -> Result<Verdict<EsubFailure>> {
    Error::check_dim(s.in_dim(), g.dim())?;
    Error::check_dim(t.in_dim(), g.dim())?;
    Error::check_dim(s.out_dim(), t.out_dim())?;
    if let Verdict::Fails((lower, upper)) = s.is_monotone() {
        return Ok(Verdict::Fails(EsubFailure::NotMonotone { lower, upper }));
    }
    let sampled = ProbeConfig::new(cfg.seed, 100);
    for y in sampled.subspace_points(g) {
        if s.evaluate(&y)? != t.evaluate(&y)? {
            return Ok(Verdict::Fails(EsubFailure::Differs(y)));
        }
    }
    let cone = g.as_cone();
    for (a, b) in [(s, t), (t, s)] {
        if let Verdict::Fails(y) = dominates_on(a, b, &cone)? {
            return Ok(Verdict::Fails(EsubFailure::Differs(y)));
        }
    }
    Ok(Verdict::Holds)
}

/// `g(x) = inf{S(|x - y|) : y ∈ G}`, componentwise, by one LP per
/// component. Needs `S` monotone so that `w >= |x - y|` may stand in for
/// the modulus.
pub fn extreme_gap(s: &Form, g: &SubspaceSpec, x: &Vector) -> Result<Vector> {
    Error::check_dim(s.in_dim(), g.dim())?;
    Error::check_dim(s.in_dim(), x.len())?;
    if let Verdict::Fails((lower, upper)) = s.is_monotone() {
        return Err(Error::NotMonotone { lower, upper });
    }
    let n = x.len();
    (0..s.out_dim())
        .map(|k| {
            let mut b = LpBuilder::new();
            let y = b.subspace_point(g);
            let w = b.vars(n, VarBound::Free);
            let w: Vec<Affine> = w.into_iter().map(Affine::var).collect();
            for i in 0..n {
                let xi = Affine::constant(x[i].clone());
                b.ge(&w[i], &xi.sub(&y[i]));
                b.ge(&w[i], &y[i].sub(&xi));
            }
            let v = b.epigraph(s, k, &w);
            let mut obj = Affine::default();
            obj.add_term(v, -rational::one());
            match solve_lp(&b.build(&obj))? {
                LpResult::Optimal { value, .. } => Ok(-value),
                other => Err(Error::Internal(format!(
                    "gap LP ended {:?}",
                    other.status()
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Vector::new)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremality {
    /// `g` vanishes identically, so `S` is an extreme point.
    Extreme,
    /// `g` is nonzero somewhere; the sufficient condition says nothing.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ExtremeResult {
    pub verdict: Extremality,
    /// `(x, g(x))` at `±e_k`.
    pub values: Vec<(Vector, Vector)>,
}

/// `g` is nonnegative and sublinear, so it vanishes identically iff it
/// vanishes at every `±e_k`.
pub fn extreme_point_test(
    s: &Form,
    g: &SubspaceSpec,
    t: &Form,
    cfg: &ProbeConfig,
) -> Result<ExtremeResult> {
    if let Verdict::Fails(why) = is_in_esub(s, t, g, cfg)? {
        return Err(Error::precondition(
            format!("S is not a monotone sublinear extension of T: {why}"),
            why.point().cloned(),
        ));
    }
    let n = s.in_dim();
    let mut values = Vec::with_capacity(2 * n);
    for k in 0..n {
        let e = Vector::unit(n, k);
        for x in [e.clone(), -&e] {
            let gap = extreme_gap(s, g, &x)?;
            values.push((x, gap));
        }
    }
    let verdict = if values.iter().all(|(_, v)| v.iter().all(Zero::is_zero)) {
        Extremality::Extreme
    } else {
        Extremality::Inconclusive
    };
    Ok(ExtremeResult { verdict, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::MaxLinOperator;
    use crate::rational::ratio;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn scalar(gens: &[&[i64]]) -> Form {
        MaxLinOperator::scalar(gens[0].len(), gens.iter().map(|g| v(g)).collect())
            .unwrap()
            .into()
    }

    fn cfg() -> ProbeConfig {
        ProbeConfig::new(0, 30)
    }

    #[test]
    fn esub_examples() {
        let g = SubspaceSpec::new(2, vec![v(&[1, 0])]).unwrap();
        let t = scalar(&[&[1, 0]]);
        assert!(is_in_esub(&t, &t, &g, &cfg()).unwrap().holds());
        let s = scalar(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            is_in_esub(&s, &t, &g, &cfg()).unwrap(),
            Verdict::Fails(EsubFailure::Differs(v(&[-1, 0])))
        );
        let abs = scalar(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        assert!(matches!(
            is_in_esub(&abs, &t, &g, &cfg()).unwrap(),
            Verdict::Fails(EsubFailure::NotMonotone { .. })
        ));
    }

    #[test]
    fn extreme_examples() {
        let s = scalar(&[&[1, 0], &[0, 1]]);
        let full = SubspaceSpec::full(2);
        let r = extreme_point_test(&s, &full, &s, &cfg()).unwrap();
        assert_eq!(r.verdict, Extremality::Extreme);

        let zero = SubspaceSpec::zero(2);
        let sum = scalar(&[&[1, 1]]);
        let r = extreme_point_test(&sum, &zero, &Form::MaxLin(MaxLinOperator::zero(2, 1)), &cfg()).unwrap();
        assert_eq!(r.verdict, Extremality::Inconclusive);
        assert_eq!(r.values[0], (v(&[1, 0]), v(&[1])));

        let abs = scalar(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let t0 = Form::MaxLin(MaxLinOperator::zero(2, 1));
        assert!(extreme_point_test(&abs, &zero, &t0, &cfg()).is_err());

        let diag = SubspaceSpec::new(2, vec![v(&[1, 1])]).unwrap();
        let s = scalar(&[&[1, 0], &[0, 1], &[0, 0]]);
        let r = extreme_point_test(&s, &diag, &s, &cfg()).unwrap();
        assert_eq!(r.verdict, Extremality::Inconclusive);
        assert_eq!(r.values[0], (v(&[1, 0]), Vector::new(vec![ratio(1, 2)])));
    }
}

//! Extensions built from positive parts: the Kantorovich extension, the
//! local component along a positive vector, and restriction to an ideal.

use num::{BigInt, Signed, Zero};

use super::{
    leq, monotone_probe_check, nonnegative_check, probe_check, sublinear_checks, Extension,
    ExtensionReport, ProbeConfig,
};
use crate::error::{Error, Result};
use crate::lattice::{ideal_project, IdealSpec, Vector};
use crate::ops::{is_monotone, Form, MaxLinOperator, PosPartForm, Verdict};
use crate::rational::{self, Rational};

use super::extreme::is_in_esub;

fn require_monotone(t: &MaxLinOperator) -> Result<()> {
    match is_monotone(t) {
        Verdict::Holds => Ok(()),
        Verdict::Fails((lower, upper)) => Err(Error::NotMonotone { lower, upper }),
    }
}

/// `x -> T(mask ∘ x+)` as a positive-part form.
fn masked_pospart(t: &MaxLinOperator, mask: &Vector) -> Result<PosPartForm> {
    let components = t
        .components()
        .iter()
        .map(|gens| gens.iter().map(|a| a.hadamard(mask)).collect())
        .collect();
    PosPartForm::new(MaxLinOperator::new(t.in_dim(), components)?.dedup())
}

/// `S(x) = T(x+)`, the smallest monotone sublinear extension of `T` from
/// the positive cone.
pub fn kantorovich_extend(t: &MaxLinOperator, cfg: &ProbeConfig) -> Result<Extension<PosPartForm>> {
    require_monotone(t)?;
    let s = PosPartForm::new(t.clone())?;
    let form = Form::PosPart(s.clone());
    let eval = |x: &Vector| form.evaluate(x);
    let probes = cfg.points(t.in_dim(), &[]);

    let mut report = ExtensionReport::new();
    report.record(
        "agrees_on_positive_cone",
        probe_check(&probes, |x| {
            let p = x.pos_part();
            Ok(form.evaluate(&p)? == t.evaluate(&p)?)
        })?,
    );
    report.record("nonnegative", nonnegative_check(&eval, &probes)?);
    report.record_bool("monotone_generators", form.is_monotone().holds());
    report.record("monotone", monotone_probe_check(&eval, &probes)?);
    sublinear_checks(&mut report, &eval, &probes)?;
    Ok(Extension { operator: s, report })
}

/// The least `N` with `y+ ∧ N x = π_supp(x)(y+)`.
pub fn n_star(x: &Vector, y: &Vector) -> BigInt {
    let yp = y.pos_part();
    x.iter()
        .zip(yp.iter())
        .filter(|(xk, _)| xk.is_positive())
        .map(|(xk, yk)| rational::ceil(&(yk / xk)))
        .max()
        .filter(|m| m.is_positive())
        .unwrap_or_else(BigInt::zero)
}

/// The component of `T` along `x >= 0`: `S_x(y) = T(π_supp(x)(y+))`.
#[derive(Clone, Debug)]
pub struct LocalComponent {
    pub form: PosPartForm,
    pub x: Vector,
    pub report: ExtensionReport,
}

impl LocalComponent {
    pub fn evaluate(&self, y: &Vector) -> Result<Vector> {
        self.form.inner().evaluate(&y.pos_part())
    }

    pub fn n_star(&self, y: &Vector) -> BigInt {
        n_star(&self.x, y)
    }
}

/// `y+ ∧ n x`.
fn truncate(y: &Vector, x: &Vector, n: &BigInt) -> Vector {
    let nx = x.scale(&Rational::from_integer(n.clone()));
    y.pos_part().meet(&nx).expect("equal lengths")
}

pub fn local_component(t: &MaxLinOperator, x: &Vector, cfg: &ProbeConfig) -> Result<LocalComponent> {
    Error::check_dim(t.in_dim(), x.len())?;
    if !x.is_nonneg() {
        return Err(Error::precondition("x must be nonnegative", Some(x.clone())));
    }
    require_monotone(t)?;
    let mask: Vector = x
        .iter()
        .map(|v| if v.is_positive() { rational::one() } else { rational::zero() })
        .collect();
    let form = masked_pospart(t, &mask)?;
    let s = Form::PosPart(form.clone());
    let eval = |y: &Vector| s.evaluate(y);
    let probes = cfg.points(t.in_dim(), std::slice::from_ref(x));

    let mut report = ExtensionReport::new();
    report.record(
        "bounds",
        probe_check(&probes, |y| {
            let v = s.evaluate(y)?;
            Ok(v.is_nonneg() && leq(&v, &t.evaluate(&y.pos_part())?))
        })?,
    );
    report.record(
        "agrees_at_x",
        probe_check(std::slice::from_ref(x), |x| Ok(s.evaluate(x)? == t.evaluate(x)?))?,
    );
    let complement = mask.map(|m| rational::one() - m);
    report.record(
        "vanishes_on_disjoint",
        probe_check(&probes, |y| {
            let d = y.hadamard(&complement);
            Ok(!d.is_disjoint(x)? || s.evaluate(&d)?.is_zero())
        })?,
    );
    report.record(
        "stabilizes",
        probe_check(&probes, |y| {
            let limit = y.pos_part().hadamard(&mask);
            let ns = n_star(x, y);
            let target = s.evaluate(y)?;
            let mut prev: Option<Vector> = None;
            let mut n = BigInt::zero();
            while n <= &ns + 3 {
                let z = truncate(y, x, &n);
                let v = t.evaluate(&z)?;
                if prev.as_ref().is_some_and(|p| !leq(p, &v)) {
                    return Ok(false);
                }
                if (z == limit) != (n >= ns) || (n >= ns && v != target) {
                    return Ok(false);
                }
                prev = Some(v);
                n += 1;
            }
            Ok(true)
        })?,
    );
    report.record("monotone", monotone_probe_check(&eval, &probes)?);
    sublinear_checks(&mut report, &eval, &probes)?;
    Ok(LocalComponent {
        form,
        x: x.clone(),
        report,
    })
}

/// Decides `T_A <= T_B` at the probes for `A ⊆ B`.
pub fn ideal_order_check(
    t: &MaxLinOperator,
    a: &IdealSpec,
    b: &IdealSpec,
    probes: &[Vector],
) -> Result<Verdict> {
    if !a.is_subset_of(b) {
        return Err(Error::Invalid("ideal order check needs A ⊆ B".into()));
    }
    let ta = Form::PosPart(masked_pospart(t, &a.mask())?);
    let tb = Form::PosPart(masked_pospart(t, &b.mask())?);
    probe_check(probes, |y| Ok(leq(&ta.evaluate(y)?, &tb.evaluate(y)?)))
}

/// `T_A(x) = sup{T(y) : y ∈ A, 0 <= y <= x}`, which is `T(π_A(x+))`.
pub fn ideal_restriction(
    t: &MaxLinOperator,
    a: &IdealSpec,
    cfg: &ProbeConfig,
) -> Result<Extension<PosPartForm>> {
    Error::check_dim(t.in_dim(), a.dim())?;
    require_monotone(t)?;
    let form = masked_pospart(t, &a.mask())?;
    let ta = Form::PosPart(form.clone());
    let probes = cfg.points(t.in_dim(), &[]);

    let mut report = ExtensionReport::new();
    report.record(
        "bounds",
        probe_check(&probes, |y| {
            let v = ta.evaluate(y)?;
            Ok(v.is_nonneg() && leq(&v, &t.evaluate(&y.pos_part())?))
        })?,
    );
    report.record(
        "agrees_on_ideal",
        probe_check(&probes, |y| {
            let z = ideal_project(a, &y.pos_part())?;
            Ok(ta.evaluate(&z)? == t.evaluate(&z)?)
        })?,
    );
    let ad = a.complement();
    report.record(
        "vanishes_on_complement",
        probe_check(&probes, |y| Ok(ta.evaluate(&ideal_project(&ad, y)?)?.is_zero()))?,
    );
    let mut larger: Vec<IdealSpec> = ad
        .coords()
        .iter()
        .map(|&k| IdealSpec::new(a.dim(), a.coords().iter().copied().chain([k])))
        .collect::<Result<_>>()?;
    larger.push(IdealSpec::full(a.dim()));
    let mut order = Verdict::Holds;
    for b in &larger {
        order = ideal_order_check(t, a, b, &probes)?;
        if !order.holds() {
            break;
        }
    }
    report.record("order_in_ideal", order);
    Ok(Extension {
        operator: form,
        report,
    })
}

/// The smallest monotone sublinear extension of `T` from the ideal `A`,
/// checked against each candidate member of the extension set on the
/// positive cone.
pub fn minimal_extension(
    t: &MaxLinOperator,
    a: &IdealSpec,
    candidates: &[Form],
    cfg: &ProbeConfig,
) -> Result<Extension<PosPartForm>> {
    let mut ext = ideal_restriction(t, a, cfg)?;
    let ta = Form::PosPart(ext.operator.clone());
    let g = a.as_subspace();
    let base = Form::MaxLin(t.clone());
    let probes: Vec<Vector> = cfg
        .points(t.in_dim(), &[])
        .iter()
        .map(Vector::pos_part)
        .collect();
    for (i, q) in candidates.iter().enumerate() {
        if let Verdict::Fails(why) = is_in_esub(q, &base, &g, cfg)? {
            return Err(Error::precondition(
                format!("candidate {i} is not a monotone sublinear extension: {why}"),
                why.point().cloned(),
            ));
        }
        ext.report.record(
            format!("below_candidate_{i}"),
            probe_check(&probes, |x| Ok(leq(&ta.evaluate(x)?, &q.evaluate(x)?)))?,
        );
    }
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{grid_sup_oracle, GridDomain};
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn scalar(gens: &[&[i64]]) -> MaxLinOperator {
        MaxLinOperator::scalar(gens[0].len(), gens.iter().map(|g| v(g)).collect()).unwrap()
    }

    fn cfg() -> ProbeConfig {
        ProbeConfig::new(0, 40)
    }

    #[test]
    fn kantorovich_examples() {
        let t = scalar(&[&[1, 0], &[0, 1]]);
        let ext = kantorovich_extend(&t, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        let s = Form::PosPart(ext.operator);
        assert_eq!(s.evaluate(&v(&[-3, 2])).unwrap(), v(&[2]));
        assert_eq!(s.evaluate(&v(&[1, 4])).unwrap(), v(&[4]));
        assert_eq!(s.evaluate(&v(&[-1, -2])).unwrap(), v(&[0]));
        assert!(matches!(
            kantorovich_extend(&scalar(&[&[1, -1]]), &cfg()),
            Err(Error::NotMonotone { .. })
        ));
    }

    #[test]
    fn local_component_examples() {
        let t = scalar(&[&[1, 1, 1]]);
        let x = v(&[1, 0, 2]);
        let lc = local_component(&t, &x, &cfg()).unwrap();
        assert!(lc.report.all_passed(), "{}", lc.report);
        let y = v(&[4, 5, 6]);
        assert_eq!(lc.evaluate(&y).unwrap(), v(&[10]));
        assert_eq!(lc.n_star(&y), BigInt::from(4));
        let seq: Vec<Rational> = (1..=5)
            .map(|n| t.evaluate(&truncate(&y, &x, &BigInt::from(n))).unwrap()[0].clone())
            .collect();
        assert_eq!(seq, [3, 6, 9, 10, 10].map(int));
        assert_eq!(lc.evaluate(&x).unwrap(), v(&[3]));
        assert_eq!(lc.evaluate(&v(&[0, 7, 0])).unwrap(), v(&[0]));
        assert!(local_component(&t, &v(&[1, -1, 0]), &cfg()).is_err());
    }

    #[test]
    fn n_star_edge_cases() {
        let x = v(&[2, 0]);
        assert_eq!(n_star(&x, &v(&[-1, 5])), BigInt::zero());
        assert_eq!(n_star(&x, &v(&[3, 0])), BigInt::from(2));
        assert_eq!(n_star(&x, &v(&[4, 0])), BigInt::from(2));
        assert_eq!(n_star(&v(&[0, 0]), &v(&[4, 1])), BigInt::zero());
    }

    #[test]
    fn ideal_restriction_examples() {
        let t = scalar(&[&[1, 1, 1]]);
        let a = IdealSpec::new(3, [0, 1]).unwrap();
        let ext = ideal_restriction(&t, &a, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        let ta = Form::PosPart(ext.operator);
        let x = v(&[1, 2, 3]);
        assert_eq!(ta.evaluate(&x).unwrap(), v(&[3]));
        let grid = grid_sup_oracle(&Form::MaxLin(t.clone()), &GridDomain::ideal_interval(&a, &x), &ratio(1, 4)).unwrap();
        assert_eq!(grid, v(&[3]));
        assert_eq!(ta.evaluate(&v(&[0, 0, 1])).unwrap(), v(&[0]));

        let full = ideal_restriction(&t, &IdealSpec::full(3), &cfg()).unwrap();
        let tf = Form::PosPart(full.operator);
        assert_eq!(tf.evaluate(&v(&[1, 2, 3])).unwrap(), v(&[6]));
        assert_eq!(tf.evaluate(&v(&[-1, 2, 3])).unwrap(), v(&[5]));
    }

    #[test]
    fn minimal_extension_examples() {
        let t = scalar(&[&[1, 0]]);
        let a = IdealSpec::new(2, [0]).unwrap();
        let q = Form::MaxLin(scalar(&[&[1, 1]]));
        let ext = minimal_extension(&t, &a, std::slice::from_ref(&q), &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        let ta = Form::PosPart(ext.operator);
        assert_eq!(ta.evaluate(&v(&[3, 5])).unwrap(), v(&[3]));
        assert_eq!(q.evaluate(&v(&[3, 5])).unwrap(), v(&[8]));
        assert_eq!(ta.evaluate(&v(&[3, 0])).unwrap(), v(&[3]));
        assert_eq!(ta.evaluate(&v(&[-1, 4])).unwrap(), v(&[0]));
        let d = GridDomain::ideal_interval(&a, &v(&[-1, 4]).pos_part());
        assert_eq!(grid_sup_oracle(&Form::MaxLin(t.clone()), &d, &ratio(1, 4)).unwrap(), v(&[0]));

        let not_member = Form::MaxLin(scalar(&[&[2, 0]]));
        assert!(minimal_extension(&t, &a, &[not_member], &cfg()).is_err());
    }
}

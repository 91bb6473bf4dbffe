//! Hahn-Banach type extensions: the one-dimensional cone step, the
//! inf-convolution envelope, the majorizing envelope, and the positive
//! extension pipelines built on them.
//!
//! The envelope `T_k(x) = inf{S_k(y) + p_k(x - y) : y ∈ Y}` is the largest
//! sublinear extension of `S` dominated by `p`. Its MaxLin generators are
//! the points `μ = Σ α_i g_i` over the vertices `(α, β)` of
//!
//! ```text
//! α, β >= 0,  Σ α = 1,  Σ β = 1,  Σ α_i Bᵀg_i = Σ β_j Bᵀa_j
//! ```
//!
//! where `g_i` are the generators of `p_k`, `a_j` those of `S_k` and the
//! columns of `B` span `Y`. When that polytope is too large to enumerate,
//! the envelope is kept as an LP oracle instead.

use num::Signed;

use super::{
    leq, monotone_probe_check, nonnegative_check, probe_check, sublinear_checks,
    ExtensionReport, ProbeConfig,
};
use crate::error::{Error, Result};
use crate::lattice::{combine, is_majorizing, is_riesz_subspace, ConeDomain, SubspaceSpec, Vector};
use crate::linalg;
use crate::lp::{enumerate_vertices_with, solve_lp, LpResult, Polytope, Relation, VarBound, VertexLimits};
use crate::ops::encode::{constant_point, dot, eval_point, Affine, LpBuilder};
use crate::ops::{
    dominates_on, dominates_on_region, is_monotone_on, is_positive_on_positive_cone, DomainedOperator,
    Form, MaxLinOperator, PosPartForm, Region, Verdict,
};
use crate::rational::{self, Rational};

use super::extreme::is_in_esub;

/// How `c` is chosen in `[m, p(x)]` for the cone step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum CSelectionPolicy {
    #[default]
    Min,
    Max,
    Midpoint,
    Given(Vector),
}

#[derive(Clone, Debug)]
pub struct HbStepResult {
    /// Componentwise `sup{S(u) - p(u - x) : u ∈ Y}`.
    pub m: Vector,
    pub c: Vector,
    pub p_x: Vector,
    /// `y + λx -> S(y) + λc` on `Z = {y + λx : y ∈ Y, λ <= 0}`.
    pub extended: DomainedOperator,
    pub report: ExtensionReport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EnvelopeMode {
    /// Explicit generators when the vertex enumeration fits the size
    /// bounds, the LP oracle otherwise.
    #[default]
    Auto,
    Explicit,
    Oracle,
}

/// Per-query LP evaluation of an envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvelopeOracle {
    /// `x -> min{T(y) : y ∈ G, y >= x}`.
    Majorizing { t: Form, g: SubspaceSpec },
    /// `x -> inf{S(y) + p(x - y) : y ∈ Y}`.
    InfConvolution { s: Form, y: SubspaceSpec, p: Form },
}

impl EnvelopeOracle {
    pub fn in_dim(&self) -> usize {
        match self {
            EnvelopeOracle::Majorizing { g, .. } => g.dim(),
            EnvelopeOracle::InfConvolution { y, .. } => y.dim(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            EnvelopeOracle::Majorizing { t, .. } => t.out_dim(),
            EnvelopeOracle::InfConvolution { s, .. } => s.out_dim(),
        }
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Vector> {
        Error::check_dim(self.in_dim(), x.len())?;
        (0..self.out_dim())
            .map(|k| match self {
                EnvelopeOracle::Majorizing { t, g } => majorizing_lp_value(t, g, k, x),
                EnvelopeOracle::InfConvolution { s, y, p } => inf_convolution_value(s, y, p, k, x),
            })
            .collect::<Result<Vec<_>>>()
            .map(Vector::new)
    }

    /// Builds `v >= envelope_k(arg)` into `b`, returning `v`.
    fn encode(&self, b: &mut LpBuilder, k: usize, arg: &[Affine]) -> usize {
        match self {
            EnvelopeOracle::Majorizing { t, g } => {
                let u = b.subspace_point(g);
                for (ui, xi) in u.iter().zip(arg) {
                    b.ge(ui, xi);
                }
                b.epigraph(t, k, &u)
            }
            EnvelopeOracle::InfConvolution { s, y, p } => {
                let u = b.subspace_point(y);
                let v1 = b.epigraph(s, k, &u);
                let rest: Vec<Affine> = arg.iter().zip(&u).map(|(a, ui)| a.sub(ui)).collect();
                let v2 = b.epigraph(p, k, &rest);
                let v = b.var(VarBound::Free);
                let mut sum = Affine::var(v1);
                sum.add_term(v2, rational::one());
                b.ge(&Affine::var(v), &sum);
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Envelope {
    Explicit(MaxLinOperator),
    Oracle(EnvelopeOracle),
}

impl Envelope {
    pub fn in_dim(&self) -> usize {
        match self {
            Envelope::Explicit(t) => t.in_dim(),
            Envelope::Oracle(o) => o.in_dim(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            Envelope::Explicit(t) => t.out_dim(),
            Envelope::Oracle(o) => o.out_dim(),
        }
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Vector> {
        match self {
            Envelope::Explicit(t) => t.evaluate(x),
            Envelope::Oracle(o) => o.evaluate(x),
        }
    }

    pub fn explicit(&self) -> Option<&MaxLinOperator> {
        match self {
            Envelope::Explicit(t) => Some(t),
            Envelope::Oracle(_) => None,
        }
    }

    pub fn is_explicit(&self) -> bool {
        self.explicit().is_some()
    }

    /// Positivity on `E+`: the minimum over the standard simplex is
    /// nonnegative, by one LP per component in either mode.
    pub fn is_positive_on_positive_cone(&self) -> Result<Verdict> {
        match self {
            Envelope::Explicit(t) => is_positive_on_positive_cone(&Form::MaxLin(t.clone())),
            Envelope::Oracle(o) => {
                let n = o.in_dim();
                for k in 0..o.out_dim() {
                    let mut b = LpBuilder::new();
                    let x: Vec<Affine> = b
                        .vars(n, VarBound::NonNeg)
                        .into_iter()
                        .map(Affine::var)
                        .collect();
                    let mut total = Affine::constant(-rational::one());
                    for xi in &x {
                        total.add_scaled(xi, &rational::one());
                    }
                    b.constrain(total, Relation::Eq);
                    let v = o.encode(&mut b, k, &x);
                    let mut obj = Affine::default();
                    obj.add_term(v, -rational::one());
                    match solve_lp(&b.build(&obj))? {
                        LpResult::Optimal { value, point, .. } => {
                            if value.is_positive() {
                                return Ok(Verdict::Fails(eval_point(&x, &point)));
                            }
                        }
                        other => {
                            return Err(Error::Internal(format!(
                                "envelope simplex-minimum LP ended {:?}",
                                other.status()
                            )))
                        }
                    }
                }
                Ok(Verdict::Holds)
            }
        }
    }
}

/// An envelope together with its verification report.
#[derive(Clone, Debug)]
pub struct HbExtension {
    pub envelope: Envelope,
    pub report: ExtensionReport,
}

fn subspace_domain(s: &DomainedOperator) -> Result<SubspaceSpec> {
    if !s.domain.is_subspace() {
        return Err(Error::Invalid("S must be given on a subspace".into()));
    }
    SubspaceSpec::new(s.domain.dim(), s.domain.linear_basis().to_vec())
}

fn require_dominated(p: &Form, s: &Form, y: &SubspaceSpec) -> Result<()> {
    match dominates_on(p, s, &y.as_cone())? {
        Verdict::Holds => Ok(()),
        Verdict::Fails(u) => Err(Error::precondition("S is not dominated by p on Y", Some(u))),
    }
}

fn lp_optimum(lp_value: LpResult, what: &str) -> Result<Rational> {
    match lp_value {
        LpResult::Optimal { value, .. } => Ok(value),
        LpResult::Infeasible { .. } => Err(Error::precondition(format!("{what} is infeasible"), None)),
        LpResult::Unbounded { .. } => Err(Error::precondition(format!("{what} is unbounded"), None)),
    }
}

/// `inf{S_k(y) + p_k(x - y) : y ∈ Y}` by LP.
pub fn inf_convolution_value(
    s: &Form,
    y: &SubspaceSpec,
    p: &Form,
    k: usize,
    x: &Vector,
) -> Result<Rational> {
    let oracle = EnvelopeOracle::InfConvolution {
        s: s.clone(),
        y: y.clone(),
        p: p.clone(),
    };
    let mut b = LpBuilder::new();
    let v = oracle.encode(&mut b, k, &constant_point(x));
    let mut obj = Affine::default();
    obj.add_term(v, -rational::one());
    lp_optimum(solve_lp(&b.build(&obj))?, "inf-convolution LP").map(|v| -v)
}

/// `min{T_k(y) : y ∈ G, y >= x}` by LP.
pub fn majorizing_lp_value(t: &Form, g: &SubspaceSpec, k: usize, x: &Vector) -> Result<Rational> {
    let oracle = EnvelopeOracle::Majorizing {
        t: t.clone(),
        g: g.clone(),
    };
    let mut b = LpBuilder::new();
    let v = oracle.encode(&mut b, k, &constant_point(x));
    let mut obj = Affine::default();
    obj.add_term(v, -rational::one());
    lp_optimum(solve_lp(&b.build(&obj))?, "majorizing LP").map(|v| -v)
}

fn limits(mode: EnvelopeMode) -> VertexLimits {
    match mode {
        EnvelopeMode::Auto => VertexLimits {
            max_subsystems: 200_000,
            ..VertexLimits::default()
        },
        _ => VertexLimits::default(),
    }
}

/// Resolves a mode against a fallible explicit construction.
fn choose(
    mode: EnvelopeMode,
    explicit: impl FnOnce(VertexLimits) -> Result<MaxLinOperator>,
    oracle: EnvelopeOracle,
) -> Result<Envelope> {
    match mode {
        EnvelopeMode::Oracle => Ok(Envelope::Oracle(oracle)),
        EnvelopeMode::Explicit => explicit(limits(mode)).map(Envelope::Explicit),
        EnvelopeMode::Auto => match explicit(limits(mode)) {
            Ok(t) => Ok(Envelope::Explicit(t)),
            Err(Error::SizeBound(_)) => Ok(Envelope::Oracle(oracle)),
            Err(e) => Err(e),
        },
    }
}

fn inf_convolution_generators(
    s: &MaxLinOperator,
    y: &SubspaceSpec,
    p: &MaxLinOperator,
    lim: VertexLimits,
) -> Result<MaxLinOperator> {
    let n = p.in_dim();
    let mut components = Vec::with_capacity(p.out_dim());
    for k in 0..p.out_dim() {
        let pg = p.component(k);
        let sg = s.component(k);
        let (np, ns) = (pg.len(), sg.len());
        let cols = np + ns;
        let indicator = |range: std::ops::Range<usize>| -> Vector {
            (0..cols)
                .map(|j| if range.contains(&j) { rational::one() } else { rational::zero() })
                .collect()
        };
        let mut rows = vec![(indicator(0..np), rational::one()), (indicator(np..cols), rational::one())];
        for bj in y.basis() {
            let row: Vector = pg
                .iter()
                .map(|g| g.dot(bj))
                .chain(sg.iter().map(|a| -a.dot(bj)))
                .collect();
            rows.push((row, rational::zero()));
        }
        let vertices = enumerate_vertices_with(&Polytope::standard(cols, rows), lim)?;
        if vertices.is_empty() {
            return Err(Error::Internal(format!(
                "envelope generator set for component {k} is empty although S <= p on Y"
            )));
        }
        let gens: Vec<Vector> = vertices
            .iter()
            .map(|z| combine(n, pg, &z.entries()[..np]))
            .collect();
        components.push(gens);
    }
    MaxLinOperator::new(n, components)?.prune()
}

fn majorizing_generators(t: &MaxLinOperator, g: &SubspaceSpec, lim: VertexLimits) -> Result<MaxLinOperator> {
    let n = t.in_dim();
    let mut components = Vec::with_capacity(t.out_dim());
    for k in 0..t.out_dim() {
        let tg = t.component(k);
        let cols = n + tg.len();
        let simplex: Vector = (0..cols)
            .map(|j| if j >= n { rational::one() } else { rational::zero() })
            .collect();
        let mut rows = vec![(simplex, rational::one())];
        for bj in g.basis() {
            let row: Vector = bj
                .iter()
                .cloned()
                .chain(tg.iter().map(|a| -a.dot(bj)))
                .collect();
            rows.push((row, rational::zero()));
        }
        let vertices = enumerate_vertices_with(&Polytope::standard(cols, rows), lim)?;
        if vertices.is_empty() {
            return Err(Error::Internal(format!(
                "majorizing dual polytope for component {k} is empty"
            )));
        }
        components.push(vertices.iter().map(|z| Vector::new(z.entries()[..n].to_vec())).collect());
    }
    MaxLinOperator::new(n, components)?.prune()
}

/// One step of the classical argument: extends `S` from `Y` to the cone
/// `Y + R₋x` by `T(y + λx) = S(y) + λc`.
pub fn hb_cone_step(
    s: &DomainedOperator,
    p: &Form,
    x: &Vector,
    policy: &CSelectionPolicy,
    cfg: &ProbeConfig,
) -> Result<HbStepResult> {
    let y = subspace_domain(s)?;
    let n = y.dim();
    Error::check_dim(n, p.in_dim())?;
    Error::check_dim(n, x.len())?;
    Error::check_dim(p.out_dim(), s.form.out_dim())?;
    if y.contains(x) {
        return Err(Error::Invalid(format!("x = {x} lies in Y")));
    }
    require_dominated(p, &s.form, &y)?;
    let sl = s.form.to_maxlin()?;

    let mut m = Vec::with_capacity(p.out_dim());
    for k in 0..p.out_dim() {
        let mut best: Option<Rational> = None;
        for a in sl.component(k) {
            let mut b = LpBuilder::new();
            let u = b.subspace_point(&y);
            let shifted: Vec<Affine> = u
                .iter()
                .zip(x.iter())
                .map(|(ui, xi)| ui.sub(&Affine::constant(xi.clone())))
                .collect();
            let v = b.epigraph(p, k, &shifted);
            let obj = dot(a, &u).sub(&Affine::var(v));
            let value = match solve_lp(&b.build(&obj))? {
                LpResult::Optimal { value, .. } => value,
                other => {
                    return Err(Error::Internal(format!(
                        "cone-step supremum LP ended {:?}",
                        other.status()
                    )))
                }
            };
            if best.as_ref().is_none_or(|b| value > *b) {
                best = Some(value);
            }
        }
        m.push(best.expect("nonempty component"));
    }
    let m = Vector::new(m);
    let p_x = p.evaluate(x)?;
    let c = match policy {
        CSelectionPolicy::Min => m.clone(),
        CSelectionPolicy::Max => p_x.clone(),
        CSelectionPolicy::Midpoint => (&m + &p_x).scale(&rational::ratio(1, 2)),
        CSelectionPolicy::Given(c) => {
            Error::check_dim(m.len(), c.len())?;
            if !(leq(&m, c) && leq(c, &p_x)) {
                return Err(Error::Invalid(format!(
                    "c = {c} lies outside [m, p(x)] = [{m}, {p_x}]"
                )));
            }
            c.clone()
        }
    };

    let mut columns = y.basis().to_vec();
    columns.push(x.clone());
    let left = linalg::left_inverse(&columns, n)
        .ok_or_else(|| Error::Internal("Y and x are dependent".into()))?;
    let r = y.rank();
    let components = (0..p.out_dim())
        .map(|k| {
            sl.component(k)
                .iter()
                .map(|a| {
                    let mut coeffs: Vec<Rational> = y.basis().iter().map(|bj| a.dot(bj)).collect();
                    coeffs.push(c[k].clone());
                    combine(n, &left, &coeffs)
                })
                .collect()
        })
        .collect();
    let ext = MaxLinOperator::new(n, components)?.dedup();
    let z = ConeDomain::new(n, y.basis().to_vec(), vec![-x])?;
    let extended = DomainedOperator::new(ext.clone(), z.clone())?;
    let ext_form = Form::MaxLin(ext.clone());

    let mut report = ExtensionReport::new();
    report.record_bool("m_le_c_le_px", leq(&m, &c) && leq(&c, &p_x));
    report.record(
        "agrees_on_y",
        probe_check(&cfg.subspace_points(&y), |u| Ok(ext.evaluate(u)? == s.form.evaluate(u)?))?,
    );
    let zs = cfg.cone_points(&z, cfg.samples);
    report.record(
        "formula_on_z",
        probe_check(&zs, |p| {
            let coords: Vec<Rational> = left.iter().map(|row| row.dot(p)).collect();
            let yy = combine(n, y.basis(), &coords[..r]);
            let lambda = &coords[r];
            let expected = &s.form.evaluate(&yy)? + &c.scale(lambda);
            Ok(!lambda.is_positive() && ext.evaluate(p)? == expected)
        })?,
    );
    let eval = |v: &Vector| ext.evaluate(v);
    sublinear_checks(&mut report, &eval, &zs)?;
    report.record("dominated_on_z", dominates_on(p, &ext_form, &z)?);
    Ok(HbStepResult {
        m,
        c,
        p_x,
        extended,
        report,
    })
}

pub fn hb_extend_full(s: &DomainedOperator, p: &Form, cfg: &ProbeConfig) -> Result<HbExtension> {
    hb_extend_full_with(s, p, cfg, EnvelopeMode::Auto)
}

/// The inf-convolution envelope of `S` and `p`: the largest sublinear
/// extension of `S` to the whole space lying below `p`.
pub fn hb_extend_full_with(
    s: &DomainedOperator,
    p: &Form,
    cfg: &ProbeConfig,
    mode: EnvelopeMode,
) -> Result<HbExtension> {
    let y = subspace_domain(s)?;
    let n = y.dim();
    Error::check_dim(n, p.in_dim())?;
    Error::check_dim(p.out_dim(), s.form.out_dim())?;
    require_dominated(p, &s.form, &y)?;
    let oracle = EnvelopeOracle::InfConvolution {
        s: s.form.clone(),
        y: y.clone(),
        p: p.clone(),
    };
    let envelope = choose(
        mode,
        |lim| {
            let sl = s.form.to_maxlin()?.prune()?;
            let pl = p.to_maxlin()?.prune()?;
            inf_convolution_generators(&sl, &y, &pl, lim)
        },
        oracle,
    )?;
    let eval = |v: &Vector| envelope.evaluate(v);

    let mut report = ExtensionReport::new();
    report.record(
        "agrees_on_y",
        probe_check(&cfg.subspace_points(&y), |u| Ok(eval(u)? == s.form.evaluate(u)?))?,
    );
    let probes = cfg.points(n, &[]);
    match &envelope {
        Envelope::Explicit(t) => {
            report.record("dominated_by_p", dominates_on(p, &Form::MaxLin(t.clone()), &ConeDomain::new(n, SubspaceSpec::full(n).basis().to_vec(), vec![])?)?);
            let head = &probes[..probes.len().min(2 * n + 20)];
            report.record(
                "matches_inf_convolution",
                probe_check(head, |x| {
                    let lp: Vec<Rational> = (0..t.out_dim())
                        .map(|k| inf_convolution_value(&s.form, &y, p, k, x))
                        .collect::<Result<_>>()?;
                    Ok(t.evaluate(x)? == Vector::new(lp))
                })?,
            );
        }
        Envelope::Oracle(_) => {
            report.record(
                "dominated_by_p",
                probe_check(&probes, |x| Ok(leq(&eval(x)?, &p.evaluate(x)?)))?,
            );
        }
    }
    sublinear_checks(&mut report, &eval, &probes)?;

    let step_dir = (0..n).map(|k| Vector::unit(n, k)).find(|e| !y.contains(e));
    match step_dir {
        None => report.record_bool("maximal_over_cone_steps", true),
        Some(x) => {
            let mut verdict = Verdict::Holds;
            for policy in [CSelectionPolicy::Min, CSelectionPolicy::Max, CSelectionPolicy::Midpoint] {
                let step = hb_cone_step(s, p, &x, &policy, cfg)?;
                let zs = cfg.cone_points(&step.extended.domain, 50);
                verdict = probe_check(&zs, |z| {
                    Ok(leq(&step.extended.form.evaluate(z)?, &eval(z)?))
                })?;
                if !verdict.holds() {
                    break;
                }
            }
            report.record("maximal_over_cone_steps", verdict);
        }
    }
    Ok(HbExtension { envelope, report })
}

pub fn majorizing_envelope(t: &Form, g: &SubspaceSpec, cfg: &ProbeConfig) -> Result<HbExtension> {
    majorizing_envelope_with(t, g, cfg, EnvelopeMode::Auto)
}

/// `p(x) = min{T(y) : y ∈ G, y >= x}` for a majorizing subspace `G` and `T`
/// monotone on `G`. Explicit generators are the `λ`-parts of the vertices of
/// the dual polytope `{λ >= 0, μ ∈ Δ : Bᵀλ = Σ μ_a Bᵀa}`.
pub fn majorizing_envelope_with(
    t: &Form,
    g: &SubspaceSpec,
    cfg: &ProbeConfig,
    mode: EnvelopeMode,
) -> Result<HbExtension> {
    let n = g.dim();
    Error::check_dim(n, t.in_dim())?;
    if is_majorizing(g)?.is_none() {
        return Err(Error::precondition(
            "G is not majorizing: no element dominates the all-ones vector",
            Some(Vector::ones(n)),
        ));
    }
    if let Verdict::Fails((lower, upper)) = is_monotone_on(t, g)? {
        return Err(Error::NotMonotone { lower, upper });
    }
    let oracle = EnvelopeOracle::Majorizing {
        t: t.clone(),
        g: g.clone(),
    };
    let envelope = choose(
        mode,
        |lim| majorizing_generators(&t.to_maxlin()?.prune()?, g, lim),
        oracle,
    )?;
    let eval = |v: &Vector| envelope.evaluate(v);
    let probes = cfg.points(n, &[]);

    let mut report = ExtensionReport::new();
    let gp = cfg.subspace_points(g);
    report.record(
        "agrees_on_g",
        probe_check(&gp, |y| Ok(eval(y)? == t.evaluate(y)?))?,
    );
    let mut i = 0;
    report.record(
        "below_majorants",
        probe_check(&gp, |y| {
            let x = y - &probes[i % probes.len()].abs_val();
            i += 1;
            Ok(leq(&eval(&x)?, &t.evaluate(y)?))
        })?,
    );
    if let Envelope::Explicit(p) = &envelope {
        report.record(
            "matches_lp",
            probe_check(&probes, |x| {
                let lp: Vec<Rational> = (0..p.out_dim())
                    .map(|k| majorizing_lp_value(t, g, k, x))
                    .collect::<Result<_>>()?;
                Ok(p.evaluate(x)? == Vector::new(lp))
            })?,
        );
        report.record_bool("monotone_generators", p.has_nonneg_generators());
    }
    report.record("monotone", monotone_probe_check(&eval, &probes)?);
    sublinear_checks(&mut report, &eval, &probes)?;
    Ok(HbExtension { envelope, report })
}

fn require_riesz(g: &SubspaceSpec) -> Result<()> {
    match is_riesz_subspace(g)? {
        None => Ok(()),
        Some((x, _)) => Err(Error::precondition(
            "G is not a Riesz subspace: the positive part of the witness leaves G",
            Some(x),
        )),
    }
}

fn pospart_of(f: &Form) -> Result<PosPartForm> {
    match f {
        Form::MaxLin(t) => PosPartForm::new(t.clone()),
        Form::PosPart(p) => Ok(p.clone()),
    }
}

/// Extends `S`, monotone on the Riesz subspace `G` with `0 <= S <= T` on
/// `G+`, to a positive sublinear `Q` with `Q <= T` on `E+`, through the
/// envelope of `S` under `p(x) = T(x+)`.
pub fn positive_extend_dominated(
    s: &Form,
    t: &Form,
    g: &SubspaceSpec,
    cfg: &ProbeConfig,
) -> Result<HbExtension> {
    let n = g.dim();
    Error::check_dim(n, s.in_dim())?;
    Error::check_dim(n, t.in_dim())?;
    Error::check_dim(s.out_dim(), t.out_dim())?;
    require_riesz(g)?;
    if let Verdict::Fails((lower, upper)) = t.is_monotone() {
        return Err(Error::NotMonotone { lower, upper });
    }
    if let Verdict::Fails(x) = is_positive_on_positive_cone(t)? {
        return Err(Error::precondition("T is negative on the positive cone", Some(x)));
    }
    if let Verdict::Fails((lower, upper)) = is_monotone_on(s, g)? {
        return Err(Error::NotMonotone { lower, upper });
    }
    let g_plus = Region::PositiveSubspace(g.clone());
    let zero = Form::MaxLin(MaxLinOperator::zero(n, s.out_dim()));
    if let Verdict::Fails(x) = dominates_on_region(s, &zero, &g_plus)? {
        return Err(Error::precondition("S is negative somewhere on G+", Some(x)));
    }
    if let Verdict::Fails(x) = dominates_on_region(t, s, &g_plus)? {
        return Err(Error::precondition("S exceeds T somewhere on G+", Some(x)));
    }
    let p = Form::PosPart(pospart_of(t)?);
    let mut report = ExtensionReport::new();
    let below = dominates_on(&p, s, &g.as_cone())?;
    if let Verdict::Fails(x) = &below {
        return Err(Error::Internal(format!("S(x) <= T(x+) fails on G at {x}")));
    }
    report.record("s_below_p_on_g", below);

    let ext = hb_extend_full(&DomainedOperator::on_subspace(s.clone(), g)?, &p, cfg)?;
    report.absorb("envelope", ext.report);
    let q = ext.envelope;
    report.record("positive_on_positive_cone", q.is_positive_on_positive_cone()?);
    match &q {
        Envelope::Explicit(qm) => report.record(
            "below_t_on_positive_cone",
            dominates_on(t, &Form::MaxLin(qm.clone()), &ConeDomain::positive_orthant(n))?,
        ),
        Envelope::Oracle(_) => {
            let probes: Vec<Vector> = cfg.points(n, &[]).iter().map(Vector::pos_part).collect();
            report.record(
                "below_t_on_positive_cone",
                probe_check(&probes, |x| Ok(leq(&q.evaluate(x)?, &t.evaluate(x)?)))?,
            );
        }
    }
    Ok(HbExtension {
        envelope: q,
        report,
    })
}

/// Given a monotone sublinear `S_ext` on `E` extending `T` from the Riesz
/// subspace `G`, produces a positive sublinear extension `R` of `T` with
/// `R <= q`, `q(x) = S_ext(x+)`.
pub fn positive_extension_chain(
    s_ext: &Form,
    t: &Form,
    g: &SubspaceSpec,
    cfg: &ProbeConfig,
) -> Result<HbExtension> {
    let n = g.dim();
    Error::check_dim(n, s_ext.in_dim())?;
    Error::check_dim(n, t.in_dim())?;
    require_riesz(g)?;
    if let Verdict::Fails(why) = is_in_esub(s_ext, t, g, cfg)? {
        return Err(Error::precondition(
            format!("S_ext is not a monotone sublinear extension of T: {why}"),
            why.point().cloned(),
        ));
    }
    let q = Form::PosPart(pospart_of(s_ext)?);
    let probes = cfg.points(n, &[]);
    let mut report = ExtensionReport::new();
    let at_pos = |x: &Vector| s_ext.evaluate(&x.pos_part());
    report.record("modulus_is_identity", nonnegative_check(&at_pos, &probes)?);

    let ext = hb_extend_full(&DomainedOperator::on_subspace(t.clone(), g)?, &q, cfg)?;
    report.absorb("envelope", ext.report);
    let r = ext.envelope;
    report.record("positive_on_positive_cone", r.is_positive_on_positive_cone()?);
    Ok(HbExtension {
        envelope: r,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn scalar(gens: &[&[i64]]) -> Form {
        MaxLinOperator::scalar(gens[0].len(), gens.iter().map(|g| v(g)).collect())
            .unwrap()
            .into()
    }

    fn abs_sum() -> Form {
        scalar(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])
    }

    fn cfg() -> ProbeConfig {
        ProbeConfig::new(0, 30)
    }

    fn worked_s() -> DomainedOperator {
        let y = SubspaceSpec::new(2, vec![v(&[1, 0])]).unwrap();
        DomainedOperator::on_subspace(scalar(&[&[1, 0]]), &y).unwrap()
    }

    #[test]
    fn cone_step_worked_instance() {
        let step = hb_cone_step(&worked_s(), &abs_sum(), &v(&[0, 1]), &CSelectionPolicy::Min, &cfg()).unwrap();
        assert!(step.report.all_passed(), "{}", step.report);
        assert_eq!(step.m, v(&[-1]));
        assert_eq!(step.p_x, v(&[1]));
        assert_eq!(step.c, v(&[-1]));
        assert_eq!(step.extended.form.evaluate(&v(&[3, -2])).unwrap(), v(&[5]));

        let step = hb_cone_step(&worked_s(), &abs_sum(), &v(&[0, 1]), &CSelectionPolicy::Max, &cfg()).unwrap();
        assert!(step.report.all_passed(), "{}", step.report);
        assert_eq!(step.c, v(&[1]));
        assert_eq!(step.extended.form.evaluate(&v(&[3, -2])).unwrap(), v(&[1]));
        assert_eq!(abs_sum().evaluate(&v(&[3, -2])).unwrap(), v(&[5]));

        let bad = CSelectionPolicy::Given(v(&[2]));
        assert!(hb_cone_step(&worked_s(), &abs_sum(), &v(&[0, 1]), &bad, &cfg()).is_err());
        assert!(hb_cone_step(&worked_s(), &abs_sum(), &v(&[3, 0]), &CSelectionPolicy::Min, &cfg()).is_err());
    }

    #[test]
    fn cone_step_zero_instance() {
        let y = SubspaceSpec::new(2, vec![v(&[1, 0])]).unwrap();
        let zero = Form::MaxLin(MaxLinOperator::zero(2, 1));
        let s = DomainedOperator::on_subspace(zero.clone(), &y).unwrap();
        let step = hb_cone_step(&s, &zero, &v(&[0, 1]), &CSelectionPolicy::Midpoint, &cfg()).unwrap();
        assert_eq!((step.m.clone(), step.c.clone()), (v(&[0]), v(&[0])));
        assert_eq!(step.extended.form.evaluate(&v(&[4, -3])).unwrap(), v(&[0]));
    }

    #[test]
    fn envelope_worked_instance() {
        let ext = hb_extend_full(&worked_s(), &abs_sum(), &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        let t = ext.envelope.explicit().unwrap();
        assert_eq!(t.component(0), &[v(&[1, -1]), v(&[1, 1])]);
        assert_eq!(t.evaluate(&v(&[0, 2])).unwrap(), v(&[2]));
        assert_eq!(t.evaluate(&v(&[5, 0])).unwrap(), v(&[5]));

        let oracle = hb_extend_full_with(&worked_s(), &abs_sum(), &cfg(), EnvelopeMode::Oracle).unwrap();
        assert!(oracle.report.all_passed(), "{}", oracle.report);
        assert_eq!(oracle.envelope.evaluate(&v(&[0, 2])).unwrap(), v(&[2]));
    }

    #[test]
    fn envelope_of_trivial_subspace_is_p() {
        let y = SubspaceSpec::zero(2);
        let s = DomainedOperator::on_subspace(Form::MaxLin(MaxLinOperator::zero(2, 1)), &y).unwrap();
        let p = scalar(&[&[2, 1], &[-1, 3], &[0, 0]]);
        let ext = hb_extend_full(&s, &p, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        for x in [v(&[1, 1]), v(&[-4, 2]), v(&[3, -7])] {
            assert_eq!(ext.envelope.evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn envelope_rejects_undominated() {
        let y = SubspaceSpec::new(2, vec![v(&[1, 0])]).unwrap();
        let s = DomainedOperator::on_subspace(scalar(&[&[2, 0]]), &y).unwrap();
        assert!(matches!(
            hb_extend_full(&s, &abs_sum(), &cfg()),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn majorizing_worked_instance() {
        let g = SubspaceSpec::new(2, vec![v(&[1, 1])]).unwrap();
        let t = scalar(&[&[1, 1]]);
        let ext = majorizing_envelope(&t, &g, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        let p = ext.envelope.explicit().unwrap();
        assert_eq!(p.component(0), &[v(&[0, 2]), v(&[2, 0])]);
        assert_eq!(p.evaluate(&v(&[1, 3])).unwrap(), v(&[6]));
        assert_eq!(p.evaluate(&v(&[2, 2])).unwrap(), v(&[4]));
        assert_eq!(p.evaluate(&v(&[-1, -5])).unwrap(), v(&[-2]));
        assert_eq!(majorizing_lp_value(&t, &g, 0, &v(&[1, 3])).unwrap(), int(6));

        let not_major = SubspaceSpec::new(2, vec![v(&[1, -1])]).unwrap();
        assert!(majorizing_envelope(&t, &not_major, &cfg()).is_err());
    }

    #[test]
    fn positive_extension_examples() {
        let g = SubspaceSpec::new(2, vec![v(&[1, 1])]).unwrap();
        let t = scalar(&[&[1, 1]]);
        let ext = positive_extend_dominated(&t, &t, &g, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        assert_eq!(ext.envelope.evaluate(&v(&[1, 1])).unwrap(), v(&[2]));
        let q1 = ext.envelope.evaluate(&v(&[1, 0])).unwrap();
        assert!(q1 >= v(&[0]) && q1 <= v(&[1]));

        let zero = Form::MaxLin(MaxLinOperator::zero(2, 1));
        let ext = positive_extend_dominated(&zero, &t, &g, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        assert_eq!(ext.envelope.evaluate(&v(&[1, 1])).unwrap(), v(&[0]));

        let full = SubspaceSpec::full(2);
        let mx = scalar(&[&[1, 0], &[0, 1]]);
        let ext = positive_extend_dominated(&mx, &mx, &full, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        for x in [v(&[1, 3]), v(&[-2, 5]), v(&[-1, -1])] {
            assert_eq!(ext.envelope.evaluate(&x).unwrap(), mx.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn positive_extension_rejects_non_monotone_dominator() {
        let g = SubspaceSpec::zero(2);
        let zero = Form::MaxLin(MaxLinOperator::zero(2, 1));
        let t = scalar(&[&[1, -1], &[-1, 1]]);
        assert!(matches!(
            positive_extend_dominated(&zero, &t, &g, &cfg()),
            Err(Error::NotMonotone { .. })
        ));
    }

    #[test]
    fn chain_examples() {
        let g = SubspaceSpec::new(2, vec![v(&[1, 0])]).unwrap();
        let t = scalar(&[&[1, 0]]);
        let s = scalar(&[&[1, 0], &[0, 1]]);
        let ext = positive_extension_chain(&s, &t, &g, &cfg());
        // max(x1, x2) differs from x1 at (-1, 0), so it does not extend T.
        assert!(ext.is_err());

        let pos = SubspaceSpec::new(2, vec![v(&[1, 0])]).unwrap();
        let tp = Form::PosPart(PosPartForm::new(MaxLinOperator::scalar(2, vec![v(&[1, 0])]).unwrap()).unwrap());
        let sp = Form::PosPart(PosPartForm::new(MaxLinOperator::scalar(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap()).unwrap());
        let ext = positive_extension_chain(&sp, &tp, &pos, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        assert_eq!(ext.envelope.evaluate(&v(&[1, 0])).unwrap(), v(&[1]));
        assert!(ext.envelope.evaluate(&v(&[0, 1])).unwrap() >= v(&[0]));

        let zero = Form::MaxLin(MaxLinOperator::zero(2, 1));
        let ext = positive_extension_chain(&zero, &zero, &g, &cfg()).unwrap();
        assert!(ext.report.all_passed(), "{}", ext.report);
        assert_eq!(ext.envelope.evaluate(&v(&[3, -4])).unwrap(), v(&[0]));
    }
}

//! Seeded property suites, one per construction plus the LP kernel and the
//! Choquet fixture. Every case draws from its own RNG stream, so results do
//! not depend on scheduling.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num::{BigInt, Zero};
use rayon::prelude::*;

use sublinext::engine::{self, CSelectionPolicy, EnvelopeMode, ExtensionReport, Extremality, ProbeConfig};
use sublinext::fixtures::{
    grid_sup_oracle, random_majorizing_subspace, random_maxlin_with, random_monotone_maxlin_with,
    random_riesz_subspace, random_submodular, random_subspace, Capacity, GridDomain, Lcg64, LpInstance,
};
use sublinext::lattice::SubspaceSpec;
use sublinext::linalg;
use sublinext::lp::{enumerate_vertices, solve_lp, verify_certificate, LpResult, LpStatus};
use sublinext::ops::{affine_combine, dominates_on, Verdict};
use sublinext::rational::{self, Rational};
use sublinext::{DomainedOperator, Error, Form, IdealSpec, MaxLinOperator, Result, Vector};

use crate::report::vector_json;

pub const SUITES: &[&str] = &[
    "thm31", "thm32", "thm33", "thm34", "thm35", "thm36", "thm37", "thm38", "thm39", "lp", "choquet",
];

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub label: String,
    pub report: ExtensionReport,
    pub error: Option<String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.report.all_passed()
    }

    fn from_result(label: String, r: Result<ExtensionReport>) -> Self {
        match r {
            Ok(report) => CaseResult { label, report, error: None },
            Err(e) => CaseResult {
                label,
                report: ExtensionReport::new(),
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed()).count()
    }

    fn render(&self, out: &mut String) {
        for c in &self.cases {
            let _ = write!(out, "{} {} {}", self.name, c.label, if c.passed() { "PASS" } else { "FAIL" });
            if let Some(e) = &c.error {
                let _ = write!(out, " error: {e}");
            }
            for f in c.report.failures() {
                let _ = write!(out, " {}", f.name);
                if let Some(w) = &f.witness {
                    let _ = write!(out, " witness={}", vector_json(w));
                }
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "suite {} cases={} pass={} fail={}",
            self.name,
            self.cases.len(),
            self.cases.len() - self.failures(),
            self.failures()
        );
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.suites.iter().all(|s| s.failures() == 0) {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "sublinext verify suite={} seed={} samples={}",
            self.suite, self.seed, self.samples
        );
        for s in &self.suites {
            s.render(&mut out);
        }
        let cases: usize = self.suites.iter().map(|s| s.cases.len()).sum();
        let fail: usize = self.suites.iter().map(SuiteReport::failures).sum();
        let _ = writeln!(
            out,
            "total cases={cases} pass={} fail={fail} exit={}",
            cases - fail,
            self.exit_code()
        );
        out
    }
}

/// Runs a named suite, or every suite for `"all"`.
pub fn verify_suite(name: &str, seed: u64, samples: usize) -> std::result::Result<VerifyReport, String> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(format!("unknown suite {name:?}; expected one of {} or all", SUITES.join(", ")));
    };
    let suites = names.iter().map(|n| run_one(n, seed, samples)).collect();
    Ok(VerifyReport {
        suite: name.to_string(),
        seed,
        samples,
        suites,
    })
}

type CaseFn = fn(&mut Lcg64, &ProbeConfig) -> Result<ExtensionReport>;
type FixedFn = fn(&ProbeConfig) -> Result<ExtensionReport>;

fn run_one(name: &str, seed: u64, samples: usize) -> SuiteReport {
    let (count, case, fixed): (usize, CaseFn, &[(&str, FixedFn)]) = match name {
        "thm31" => (200, kantorovich_case, &[]),
        "thm32" => (100, local_case, &[("worked", local_worked)]),
        "thm33" => (100, cone_case, &[("worked", cone_worked)]),
        "thm34" => (50, dominated_case, &[("worked", dominated_worked)]),
        "thm35" => (50, chain_case, &[("worked", chain_worked)]),
        "thm36" => (100, ideal_case, &[]),
        "thm37" => (50, majorizing_case, &[("worked", majorizing_worked)]),
        "thm38" => (100, minimal_case, &[]),
        "thm39" => (20, extreme_case, &[("full", extreme_full), ("zero", extreme_zero), ("diagonal", extreme_diagonal)]),
        "lp" => (500, lp_case, &[]),
        "choquet" => (50, choquet_case, &[("unanimity_free", choquet_fixed)]),
        _ => unreachable!("suite names are checked by the caller"),
    };
    let salt = SUITES.iter().position(|s| *s == name).expect("known suite") as u64 + 1;
    let base = ProbeConfig::new(seed, samples);
    let mut cases: Vec<CaseResult> = fixed
        .iter()
        .map(|(label, f)| CaseResult::from_result(label.to_string(), f(&base)))
        .collect();
    let random: Vec<CaseResult> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = Lcg64::stream(seed, (salt << 32) | i as u64);
            let cfg = ProbeConfig::new(u64::from(rng.next_u32()) << 32 | u64::from(rng.next_u32()), samples);
            CaseResult::from_result(format!("{i:04}"), case(&mut rng, &cfg))
        })
        .collect();
    cases.extend(random);
    SuiteReport {
        name: name.to_string(),
        cases,
    }
}

fn v(xs: &[i64]) -> Vector {
    Vector::from_ints(xs)
}

fn leq(a: &Vector, b: &Vector) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn dim(rng: &mut Lcg64, lo: i64, hi: i64) -> usize {
    rng.range(lo, hi) as usize
}

fn first_failure(probes: &[Vector], mut pred: impl FnMut(&Vector) -> Result<bool>) -> Result<Verdict> {
    for x in probes {
        if !pred(x)? {
            return Ok(Verdict::Fails(x.clone()));
        }
    }
    Ok(Verdict::Holds)
}

/// A random element of the orthogonal complement of `g`, or zero half of
/// the time. Adding it to a generator leaves the functional unchanged on `g`.
fn orthogonal_shift(rng: &mut Lcg64, g: &SubspaceSpec) -> Vector {
    let n = g.dim();
    if rng.coin() {
        return Vector::zeros(n);
    }
    let perp = linalg::nullspace(g.basis(), n);
    let coeffs: Vec<Rational> = perp.iter().map(|_| rational::int(rng.range(-2, 2))).collect();
    sublinext::lattice::combine(n, &perp, &coeffs)
}

/// One or two generators picked from each component of `t`, scaled by
/// `scale` and shifted by `shift`.
fn sub_operator(
    rng: &mut Lcg64,
    t: &MaxLinOperator,
    scale: &Rational,
    mut shift: impl FnMut(&mut Lcg64) -> Vector,
) -> MaxLinOperator {
    let components = t
        .components()
        .iter()
        .map(|gens| {
            let picks = 1 + rng.below(2.min(gens.len()) as u64) as usize;
            (0..picks)
                .map(|_| {
                    let a = &gens[rng.below(gens.len() as u64) as usize];
                    &a.scale(scale) + &shift(rng)
                })
                .collect()
        })
        .collect();
    MaxLinOperator::new(t.in_dim(), components).expect("well-formed").dedup()
}

fn maxlin(gens: &[&[i64]]) -> Form {
    Form::MaxLin(MaxLinOperator::scalar(gens[0].len(), gens.iter().map(|g| v(g)).collect()).expect("well-formed"))
}

fn abs_sum() -> Form {
    maxlin(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])
}

fn kantorovich_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let (n, m, k) = (dim(rng, 1, 5), dim(rng, 1, 5), dim(rng, 1, 4));
    let t = random_monotone_maxlin_with(rng, n, m, k, 5);
    Ok(engine::kantorovich_extend(&t, cfg)?.report)
}

fn truncate(y: &Vector, x: &Vector, n: &BigInt) -> Vector {
    y.pos_part()
        .meet(&x.scale(&Rational::from_integer(n.clone())))
        .expect("equal lengths")
}

fn local_component_report(t: &MaxLinOperator, x: &Vector, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = x.len();
    let lc = engine::local_component(t, x, cfg)?;
    let mut report = ExtensionReport::new();
    report.absorb("component", lc.report.clone());
    let mask: Vector = x.map(|v| if v.is_zero() { rational::zero() } else { rational::one() });
    let probes = cfg.points(n, &[]);
    let ys: Vec<Vector> = probes.iter().skip(2 * n).take(50).cloned().collect();
    // Least n with y+ ∧ n x at its limit, by counting up.
    report.record(
        "n_star_oracle",
        first_failure(&ys, |y| {
            let limit = y.pos_part().hadamard(&mask);
            let mut k = BigInt::zero();
            while truncate(y, x, &k) != limit {
                k += 1;
            }
            let value = lc.evaluate(y)?;
            if k != lc.n_star(y) || t.evaluate(&limit)? != value {
                return Ok(false);
            }
            // Stable from n_star on.
            for j in 0..=3 {
                if t.evaluate(&truncate(y, x, &(&k + j)))? != value {
                    return Ok(false);
                }
            }
            Ok(true)
        })?,
    );
    Ok(report)
}

fn local_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let (n, m, k) = (dim(rng, 1, 5), dim(rng, 1, 3), dim(rng, 1, 3));
    let t = random_monotone_maxlin_with(rng, n, m, k, 5);
    let x: Vector = (0..n)
        .map(|_| if rng.below(3) == 0 { rational::zero() } else { rng.nonneg_rational(4) })
        .collect();
    local_component_report(&t, &x, cfg)
}

fn local_worked(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let t = MaxLinOperator::scalar(3, vec![v(&[1, 1, 1])])?;
    let x = v(&[1, 0, 2]);
    let y = v(&[4, 5, 6]);
    let mut report = local_component_report(&t, &x, cfg)?;
    let lc = engine::local_component(&t, &x, cfg)?;
    let seq: Vec<Vector> = (0..=5)
        .map(|k| t.evaluate(&truncate(&y, &x, &BigInt::from(k))))
        .collect::<Result<_>>()?;
    let expected: Vec<Vector> = [0, 3, 6, 9, 10, 10].iter().map(|&k| v(&[k])).collect();
    report.record_bool("sequence", seq == expected);
    report.record_bool("value", lc.evaluate(&y)? == v(&[10]) && lc.n_star(&y) == BigInt::from(4));
    report.record_bool("at_x", lc.evaluate(&x)? == v(&[3]));
    report.record_bool("disjoint", lc.evaluate(&v(&[0, 7, 0]))? == v(&[0]));
    Ok(report)
}

fn hb_instance_report(
    s: &Form,
    y: &SubspaceSpec,
    p: &Form,
    x: &Vector,
    policy: &CSelectionPolicy,
    cfg: &ProbeConfig,
) -> Result<(ExtensionReport, engine::HbStepResult, engine::HbExtension)> {
    let mut report = ExtensionReport::new();
    report.record("dominated_on_y", dominates_on(p, s, &y.as_cone())?);
    let s_dom = DomainedOperator::on_subspace(s.clone(), y)?;
    let step = engine::hb_cone_step(&s_dom, p, x, policy, cfg)?;
    report.absorb("step", step.report.clone());
    let full = engine::hb_extend_full(&s_dom, p, cfg)?;
    report.absorb("envelope", full.report.clone());
    let zs = cfg.cone_points(&step.extended.domain, 50);
    report.record(
        "envelope_dominates_step",
        first_failure(&zs, |z| Ok(leq(&step.extended.form.evaluate(z)?, &full.envelope.evaluate(z)?)))?,
    );
    Ok((report, step, full))
}

fn cone_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 4);
    let r = dim(rng, 1, n as i64 - 1);
    let y = random_subspace(rng, n, r);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 2, 3));
    let p = random_maxlin_with(rng, n, m, k, 4);
    let s = sub_operator(rng, &p, &rational::one(), |rng| orthogonal_shift(rng, &y));
    let x = loop {
        let x = rng.vector(n, 3);
        if !y.contains(&x) {
            break x;
        }
    };
    let policy = match rng.below(3) {
        0 => CSelectionPolicy::Min,
        1 => CSelectionPolicy::Max,
        _ => CSelectionPolicy::Midpoint,
    };
    Ok(hb_instance_report(&s.into(), &y, &p.into(), &x, &policy, cfg)?.0)
}

fn cone_worked(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let y = SubspaceSpec::new(2, vec![v(&[1, 0])])?;
    let s = maxlin(&[&[1, 0]]);
    let x = v(&[0, 1]);
    let (mut report, step, full) = hb_instance_report(&s, &y, &abs_sum(), &x, &CSelectionPolicy::Min, cfg)?;
    report.record_bool("m", step.m == v(&[-1]) && step.p_x == v(&[1]));
    report.record_bool("step_value", step.extended.form.evaluate(&v(&[3, -2]))? == v(&[5]));
    let max = engine::hb_cone_step(
        &DomainedOperator::on_subspace(s, &y)?,
        &abs_sum(),
        &x,
        &CSelectionPolicy::Max,
        cfg,
    )?;
    report.record_bool("max_policy_value", max.c == v(&[1]) && max.extended.form.evaluate(&v(&[3, -2]))? == v(&[1]));
    let gens: Option<BTreeSet<Vector>> = full.envelope.explicit().map(|t| t.component(0).iter().cloned().collect());
    report.record_bool("generators", gens == Some([v(&[1, 1]), v(&[1, -1])].into_iter().collect()));
    report.record_bool("envelope_value", full.envelope.evaluate(&v(&[0, 2]))? == v(&[2]));
    Ok(report)
}

fn dominated_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 4);
    let g = random_riesz_subspace(rng, n);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 1, 3));
    let t = random_monotone_maxlin_with(rng, n, m, k, 4);
    let scale = if rng.coin() { rational::one() } else { rational::ratio(1, 2) };
    let s = sub_operator(rng, &t, &scale, |rng| orthogonal_shift(rng, &g));
    Ok(engine::positive_extend_dominated(&s.into(), &t.into(), &g, cfg)?.report)
}

fn dominated_worked(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let g = SubspaceSpec::new(2, vec![v(&[1, 1])])?;
    let t = maxlin(&[&[1, 1]]);
    let q = engine::positive_extend_dominated(&t, &t, &g, cfg)?;
    let mut report = q.report;
    let e1 = q.envelope.evaluate(&v(&[1, 0]))?;
    report.record_bool("value_on_g", q.envelope.evaluate(&v(&[1, 1]))? == v(&[2]));
    report.record_bool("value_e1_in_range", leq(&v(&[0]), &e1) && leq(&e1, &v(&[1])));
    Ok(report)
}

fn chain_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 4);
    let g = random_riesz_subspace(rng, n);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 1, 3));
    let s_ext = random_monotone_maxlin_with(rng, n, m, k, 4);
    // T agrees with S_ext on G but is written with shifted generators.
    let components = s_ext
        .components()
        .iter()
        .map(|gens| gens.iter().map(|a| a + &orthogonal_shift(rng, &g)).collect())
        .collect();
    let t = MaxLinOperator::new(n, components)?;
    Ok(engine::positive_extension_chain(&s_ext.into(), &t.into(), &g, cfg)?.report)
}

fn chain_worked(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let g = SubspaceSpec::new(2, vec![v(&[1, 0])])?;
    let t = Form::PosPart(sublinext::PosPartForm::new(MaxLinOperator::scalar(2, vec![v(&[1, 0])])?)?);
    let s = Form::PosPart(sublinext::PosPartForm::new(MaxLinOperator::scalar(
        2,
        vec![v(&[1, 0]), v(&[0, 1])],
    )?)?);
    let r = engine::positive_extension_chain(&s, &t, &g, cfg)?;
    let mut report = r.report;
    report.record_bool("value", r.envelope.evaluate(&v(&[1, 0]))? == v(&[1]));
    report.record_bool("e2_nonnegative", leq(&v(&[0]), &r.envelope.evaluate(&v(&[0, 1]))?));
    Ok(report)
}

fn random_ideal(rng: &mut Lcg64, n: usize) -> IdealSpec {
    IdealSpec::new(n, (0..n).filter(|_| rng.coin())).expect("coordinates in range")
}

fn ideal_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 4);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 1, 3));
    let t = random_monotone_maxlin_with(rng, n, m, k, 4);
    let a = random_ideal(rng, n);
    let b = IdealSpec::new(n, a.coords().iter().copied().chain((0..n).filter(|_| rng.coin())))?;
    let ext = engine::ideal_restriction(&t, &a, cfg)?;
    let mut report = ExtensionReport::new();
    report.absorb("restriction", ext.report);
    report.record("order_a_in_b", engine::ideal_order_check(&t, &a, &b, &cfg.points(n, &[]))?);
    let ta = Form::PosPart(ext.operator);
    let quarter = rational::ratio(1, 4);
    let grid_points: Vec<Vector> = (0..2)
        .map(|_| (0..n).map(|_| rational::ratio(rng.range(-4, 8), 4)).collect())
        .collect();
    let tf = Form::MaxLin(t);
    report.record(
        "grid_attains",
        first_failure(&grid_points, |x| {
            let sup = grid_sup_oracle(&tf, &GridDomain::ideal_interval(&a, &x.pos_part()), &quarter)?;
            Ok(sup == ta.evaluate(x)?)
        })?,
    );
    Ok(report)
}

fn majorizing_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 4);
    let r = dim(rng, 1, 2.min(n as i64));
    let g = random_majorizing_subspace(rng, n, r);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 1, 3));
    let t = random_monotone_maxlin_with(rng, n, m, k, 4);
    Ok(engine::majorizing_envelope_with(&t.into(), &g, cfg, EnvelopeMode::Explicit)?.report)
}

fn majorizing_worked(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let g = SubspaceSpec::new(2, vec![v(&[1, 1])])?;
    let ext = engine::majorizing_envelope_with(&maxlin(&[&[1, 1]]), &g, cfg, EnvelopeMode::Explicit)?;
    let mut report = ext.report;
    let gens: Option<BTreeSet<Vector>> = ext.envelope.explicit().map(|p| p.component(0).iter().cloned().collect());
    report.record_bool("generators", gens == Some([v(&[2, 0]), v(&[0, 2])].into_iter().collect()));
    let values = [(v(&[1, 3]), 6), (v(&[2, 2]), 4), (v(&[-1, -5]), -2)];
    let mut ok = true;
    for (x, want) in &values {
        ok &= ext.envelope.evaluate(x)? == v(&[*want]);
    }
    report.record_bool("values", ok);
    Ok(report)
}

fn minimal_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 4);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 1, 3));
    let t = random_monotone_maxlin_with(rng, n, m, k, 4);
    let a = loop {
        let a = random_ideal(rng, n);
        if !a.coords().is_empty() {
            break a;
        }
    };
    // R >= 0 is monotone and vanishes on A, so T + R extends T from A.
    let off = a.complement();
    let r_components = (0..m)
        .map(|_| {
            let mut gens = vec![Vector::zeros(n)];
            for _ in 0..rng.range(1, 2) {
                gens.push(
                    (0..n)
                        .map(|i| if off.contains_coord(i) { rng.nonneg_rational(3) } else { rational::zero() })
                        .collect(),
                );
            }
            gens
        })
        .collect();
    let r = MaxLinOperator::new(n, r_components)?.dedup();
    let q1 = Form::MaxLin(t.clone());
    let q2 = Form::MaxLin(t.sum(&r)?);
    let q3 = Form::MaxLin(affine_combine(&q1, &q2, &rational::ratio(1, 3))?);
    let q4 = Form::MaxLin(affine_combine(&q2, &q1, &rational::ratio(1, 2))?);
    let mut report = ExtensionReport::new();
    let g = a.as_subspace();
    for (name, q) in [("mixture_a_in_esub", &q3), ("mixture_b_in_esub", &q4)] {
        let member = engine::is_in_esub(q, &q1, &g, cfg)?;
        report.record_bool(name, member.holds());
    }
    let ext = engine::minimal_extension(&t, &a, &[q1, q2, q3, q4], cfg)?;
    report.absorb("minimal", ext.report);
    Ok(report)
}

/// Tries `S = (Q + R)/2` with `Q = S + d·x`, `R = S - d·x`. Any such pair
/// inside the extension set must collapse to `S` when `S` is extreme.
fn decomposition_check(
    s: &MaxLinOperator,
    t: &Form,
    g: &SubspaceSpec,
    rng: &mut Lcg64,
    cfg: &ProbeConfig,
) -> Result<Verdict> {
    let n = s.in_dim();
    let mut shifts = vec![Vector::zeros(n)];
    for _ in 0..3 {
        shifts.push(rng.vector(n, 1));
    }
    for _ in 0..2 {
        shifts.push(orthogonal_shift(rng, g));
    }
    let probes = cfg.points(n, &[]);
    let sf = Form::MaxLin(s.clone());
    for d in &shifts {
        let shifted = |sign: &Rational| -> Result<Form> {
            let components = s
                .components()
                .iter()
                .map(|gens| gens.iter().map(|a| a + &d.scale(sign)).collect())
                .collect();
            Ok(Form::MaxLin(MaxLinOperator::new(n, components)?))
        };
        let q = shifted(&rational::one())?;
        let r = shifted(&-rational::one())?;
        if !(engine::is_in_esub(&q, t, g, cfg)?.holds() && engine::is_in_esub(&r, t, g, cfg)?.holds()) {
            continue;
        }
        let half = rational::ratio(1, 2);
        for x in &probes {
            let (qx, rx, sx) = (q.evaluate(x)?, r.evaluate(x)?, sf.evaluate(x)?);
            if (&qx + &rx).scale(&half) == sx && (qx != sx || rx != sx) {
                return Ok(Verdict::Fails(x.clone()));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn extreme_report(
    s: &MaxLinOperator,
    g: &SubspaceSpec,
    rng: &mut Lcg64,
    cfg: &ProbeConfig,
) -> Result<(ExtensionReport, engine::ExtremeResult)> {
    let n = s.in_dim();
    let sf = Form::MaxLin(s.clone());
    let res = engine::extreme_point_test(&sf, g, &sf, cfg)?;
    let probes: Vec<Vector> = cfg.points(n, &[]).into_iter().take(2 * n + 100).collect();
    let gaps: Vec<Vector> = probes
        .iter()
        .map(|x| engine::extreme_gap(&sf, g, x))
        .collect::<Result<_>>()?;
    let mut report = ExtensionReport::new();
    let all_zero = gaps.iter().all(|g| g.is_zero());
    report.record_bool("basis_criterion_matches", (res.verdict == Extremality::Extreme) == all_zero);
    report.record(
        "gap_nonnegative",
        first_failure(&probes, |x| {
            let i = probes.iter().position(|p| p == x).expect("probe");
            Ok(gaps[i].is_nonneg())
        })?,
    );
    if g.rank() == 0 {
        // No y to subtract: g(x) = S(|x|).
        let mut i = 0;
        report.record(
            "gap_on_zero_subspace",
            first_failure(&probes, |x| {
                i += 1;
                Ok(gaps[i - 1] == s.evaluate(&x.abs_val())?)
            })?,
        );
    }
    if res.verdict == Extremality::Extreme {
        report.record("decomposition", decomposition_check(s, &sf, g, rng, cfg)?);
    }
    Ok((report, res))
}

fn extreme_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 2, 3);
    let (m, k) = (dim(rng, 1, 2), dim(rng, 1, 3));
    let s = random_monotone_maxlin_with(rng, n, m, k, 4);
    let g = match rng.below(3) {
        0 => SubspaceSpec::full(n),
        1 => SubspaceSpec::zero(n),
        _ => {
            let r = dim(rng, 1, n as i64 - 1);
            random_subspace(rng, n, r)
        }
    };
    Ok(extreme_report(&s, &g, rng, cfg)?.0)
}

fn gap_at(res: &engine::ExtremeResult, x: &Vector) -> Option<Vector> {
    res.values.iter().find(|(p, _)| p == x).map(|(_, g)| g.clone())
}

fn extreme_full(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let s = MaxLinOperator::scalar(2, vec![v(&[1, 0]), v(&[0, 1])])?;
    let mut rng = Lcg64::stream(cfg.seed, 0);
    let (mut report, res) = extreme_report(&s, &SubspaceSpec::full(2), &mut rng, cfg)?;
    report.record_bool("extreme", res.verdict == Extremality::Extreme);
    Ok(report)
}

fn extreme_zero(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let s = MaxLinOperator::scalar(2, vec![v(&[1, 1])])?;
    let mut rng = Lcg64::stream(cfg.seed, 1);
    let (mut report, res) = extreme_report(&s, &SubspaceSpec::zero(2), &mut rng, cfg)?;
    report.record_bool("inconclusive", res.verdict == Extremality::Inconclusive);
    report.record_bool("gap_e1", gap_at(&res, &v(&[1, 0])) == Some(v(&[1])));
    Ok(report)
}

fn extreme_diagonal(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let s = MaxLinOperator::scalar(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[0, 0])])?;
    let g = SubspaceSpec::new(2, vec![v(&[1, 1])])?;
    let mut rng = Lcg64::stream(cfg.seed, 2);
    let (mut report, res) = extreme_report(&s, &g, &mut rng, cfg)?;
    report.record_bool("inconclusive", res.verdict == Extremality::Inconclusive);
    report.record_bool("gap_e1", gap_at(&res, &v(&[1, 0])) == Some(Vector::new(vec![rational::ratio(1, 2)])));
    Ok(report)
}

fn lp_case(rng: &mut Lcg64, _cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let (vars, rows) = (dim(rng, 1, 5), dim(rng, 1, 10));
    let inst = LpInstance::random(rng, vars, rows);
    let (primal, dual) = (inst.primal(), inst.dual());
    let p = solve_lp(&primal)?;
    let d = solve_lp(&dual)?;
    let mut report = ExtensionReport::new();
    report.record_bool("primal_certificate", verify_certificate(&primal, &p));
    report.record_bool("dual_certificate", verify_certificate(&dual, &d));
    let duality = match (&p, &d) {
        (LpResult::Optimal { value: vp, .. }, LpResult::Optimal { value: vd, .. }) => *vp == -vd.clone(),
        (LpResult::Optimal { .. }, _) => false,
        (LpResult::Unbounded { .. }, _) => d.status() == LpStatus::Infeasible,
        (LpResult::Infeasible { .. }, _) => d.status() != LpStatus::Optimal,
    };
    report.record_bool("strong_duality", duality);
    let oracle = match enumerate_vertices(&inst.polytope()) {
        Ok(vs) if vs.is_empty() => p.status() == LpStatus::Infeasible,
        Ok(vs) => {
            let best = vs.iter().map(|x| inst.objective.dot(x)).max();
            p.value().cloned() == best
        }
        Err(Error::UnboundedPolytope) => p.status() != LpStatus::Infeasible,
        Err(e) => return Err(e),
    };
    report.record_bool("vertex_oracle", oracle);
    Ok(report)
}

fn lovasz_report(nu: &Capacity, cfg: &ProbeConfig) -> Result<(ExtensionReport, MaxLinOperator)> {
    let mut report = ExtensionReport::new();
    report.record_bool("submodular", nu.is_submodular()?.holds());
    let l = nu.lovasz_maxlin()?;
    let probes: Vec<Vector> = cfg.points(nu.n(), &[]).iter().map(Vector::abs_val).collect();
    report.record(
        "lovasz_matches_choquet",
        first_failure(&probes, |x| Ok(l.eval_component(0, x) == nu.choquet_eval(x)?))?,
    );
    Ok((report, l))
}

fn choquet_case(rng: &mut Lcg64, cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let n = dim(rng, 1, 5);
    let nu = random_submodular(rng, n, 4);
    Ok(lovasz_report(&nu, cfg)?.0)
}

fn choquet_fixed(cfg: &ProbeConfig) -> Result<ExtensionReport> {
    let nu = Capacity::new(2, vec![rational::zero(), rational::one(), rational::one(), rational::one()])?;
    let (mut report, l) = lovasz_report(&nu, cfg)?;
    let gens: BTreeSet<Vector> = l.component(0).iter().cloned().collect();
    report.record_bool("generators", gens == [v(&[1, 0]), v(&[0, 1])].into_iter().collect());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(verify_suite("nope", 0, 10).is_err());
    }

    #[test]
    fn small_suites_pass() {
        for name in ["thm32", "thm37", "choquet"] {
            let r = verify_suite(name, 3, 20).unwrap();
            assert_eq!(r.exit_code(), 0, "{}", r.render());
        }
    }
}

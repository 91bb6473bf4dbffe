//! Extension constructions, each returned together with a report of exact
//! checks of the properties the construction is supposed to deliver.

mod envelope;
mod extreme;
mod positive;

use std::fmt;

pub use envelope::{
    hb_cone_step, hb_extend_full, hb_extend_full_with, inf_convolution_value, majorizing_envelope,
    majorizing_envelope_with, majorizing_lp_value, positive_extend_dominated,
    positive_extension_chain, CSelectionPolicy, Envelope, EnvelopeMode, EnvelopeOracle,
    HbExtension, HbStepResult,
};
pub use extreme::{extreme_gap, extreme_point_test, is_in_esub, EsubFailure, Extremality, ExtremeResult};
pub use positive::{
    ideal_order_check, ideal_restriction, kantorovich_extend, local_component, minimal_extension,
    n_star, LocalComponent,
};

use num::Signed;

use crate::error::Result;
use crate::fixtures::Lcg64;
use crate::lattice::{ConeDomain, SubspaceSpec, Vector};
use crate::ops::Verdict;
use crate::rational::{self, Rational};

/// Seed and sample count for the randomized probe sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            seed: 0,
            samples: 200,
        }
    }
}

/// Entries of random probes lie in `[-PROBE_BOUND, PROBE_BOUND]`.
pub const PROBE_BOUND: i64 = 10;

impl ProbeConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        ProbeConfig { seed, samples }
    }

    fn rng(&self, salt: u64) -> Lcg64 {
        Lcg64::stream(self.seed, salt)
    }

    /// `±e_k`, the extra points, then `samples` random points of `Q^n`.
    pub fn points(&self, n: usize, extra: &[Vector]) -> Vec<Vector> {
        let mut out = unit_vectors(n);
        out.extend(extra.iter().cloned());
        let mut rng = self.rng(1);
        out.extend((0..self.samples).map(|_| rng.vector(n, PROBE_BOUND)));
        out
    }

    /// Basis vectors of `g`, their negatives, then random combinations.
    pub fn subspace_points(&self, g: &SubspaceSpec) -> Vec<Vector> {
        let mut out: Vec<Vector> = g.basis().iter().flat_map(|b| [b.clone(), -b]).collect();
        out.push(Vector::zeros(g.dim()));
        let mut rng = self.rng(2);
        out.extend((0..self.samples).map(|_| {
            let c: Vec<Rational> = (0..g.rank()).map(|_| rng.bounded(5)).collect();
            g.point(&c)
        }));
        out
    }

    /// Generators of the cone, then random points `B w + R t`, `t >= 0`.
    pub fn cone_points(&self, c: &ConeDomain, count: usize) -> Vec<Vector> {
        let mut out: Vec<Vector> = c
            .linear_basis()
            .iter()
            .flat_map(|b| [b.clone(), -b])
            .chain(c.rays().iter().cloned())
            .collect();
        let mut rng = self.rng(3);
        out.extend((0..count).map(|_| {
            let w: Vec<Rational> = (0..c.linear_basis().len()).map(|_| rng.bounded(5)).collect();
            let t: Vec<Rational> = (0..c.rays().len()).map(|_| rng.bounded(5).abs()).collect();
            c.point(&w, &t)
        }));
        out
    }
}

fn unit_vectors(n: usize) -> Vec<Vector> {
    (0..n)
        .flat_map(|k| {
            let e = Vector::unit(n, k);
            [e.clone(), -&e]
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Vector>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExtensionReport {
    pub checks: Vec<Check>,
}

impl ExtensionReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: impl Into<String>, verdict: Verdict) {
        let witness = verdict.witness().cloned();
        self.checks.push(Check {
            name: name.into(),
            passed: verdict.holds(),
            witness,
        });
    }

    pub fn record_bool(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            witness: None,
        });
    }

    /// Appends another report's checks with their names prefixed.
    pub fn absorb(&mut self, prefix: &str, other: ExtensionReport) {
        for c in other.checks {
            self.checks.push(Check {
                name: format!("{prefix}.{}", c.name),
                ..c
            });
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ExtensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", c.name, if c.passed { "PASS" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, " witness={w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An extension together with its verification report.
#[derive(Clone, Debug)]
pub struct Extension<F> {
    pub operator: F,
    pub report: ExtensionReport,
}

pub(crate) type Eval<'a> = dyn Fn(&Vector) -> Result<Vector> + 'a;

/// First probe at which `pred` fails.
pub(crate) fn probe_check(
    probes: &[Vector],
    mut pred: impl FnMut(&Vector) -> Result<bool>,
) -> Result<Verdict> {
    for x in probes {
        if !pred(x)? {
            return Ok(Verdict::Fails(x.clone()));
        }
    }
    Ok(Verdict::Holds)
}

pub(crate) fn leq(a: &Vector, b: &Vector) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

const SCALARS: [(i64, i64); 4] = [(0, 1), (1, 2), (3, 1), (7, 3)];

/// Subadditivity on probe pairs and positive homogeneity under a few
/// fixed scalars.
pub(crate) fn sublinear_checks(
    report: &mut ExtensionReport,
    eval: &Eval,
    probes: &[Vector],
) -> Result<()> {
    let n = probes.len();
    let mut i = 0;
    let subadditive = probe_check(probes, |x| {
        let y = &probes[(i * 7 + 1) % n];
        i += 1;
        Ok(leq(&eval(&(x + y))?, &(&eval(x)? + &eval(y)?)))
    })?;
    report.record("subadditive", subadditive);
    let mut idx = 0;
    let homogeneous = probe_check(probes, |x| {
        let (p, q) = SCALARS[idx % SCALARS.len()];
        idx += 1;
        let l = rational::ratio(p, q);
        Ok(eval(&x.scale(&l))? == eval(x)?.scale(&l))
    })?;
    report.record("homogeneous", homogeneous);
    Ok(())
}

/// `f(x) <= f(x + |z|)` for probe pairs.
pub(crate) fn monotone_probe_check(eval: &Eval, probes: &[Vector]) -> Result<Verdict> {
    let n = probes.len();
    let mut i = 0;
    probe_check(probes, |x| {
        let z = probes[(i * 3 + 2) % n].abs_val();
        i += 1;
        Ok(leq(&eval(x)?, &eval(&(x + &z))?))
    })
}

/// `f(x) >= 0` at every probe.
pub(crate) fn nonnegative_check(eval: &Eval, probes: &[Vector]) -> Result<Verdict> {
    probe_check(probes, |x| Ok(eval(x)?.iter().all(|v| !v.is_negative())))
}

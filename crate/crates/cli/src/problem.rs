//! Problem files: declarations of operators, subspaces, ideals and
//! capacities over one space, plus an ordered list of tasks.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use sublinext::engine::{self, CSelectionPolicy, Envelope, EnvelopeMode, HbExtension, ProbeConfig};
use sublinext::fixtures::{subset_label, Capacity};
use sublinext::ops::{self, Verdict};
use sublinext::{DomainedOperator, Form, IdealSpec, MaxLinOperator, SubspaceSpec, Vector};

use crate::report::{vector_json, RunReport, TaskReport};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Space {
    pub dim: usize,
    pub codim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Task {
    pub id: String,
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Named arguments: references to declarations, vectors, policies.
    #[serde(flatten)]
    pub args: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space: Space,
    #[serde(default)]
    pub operators: BTreeMap<String, Form>,
    #[serde(default)]
    pub subspaces: BTreeMap<String, SubspaceSpec>,
    #[serde(default)]
    pub ideals: BTreeMap<String, IdealSpec>,
    #[serde(default)]
    pub capacities: BTreeMap<String, Capacity>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Operator,
    Operators,
    Subspace,
    Ideal,
    Capacity,
    Vector,
    Policy,
    Mode,
}

struct Arg {
    name: &'static str,
    kind: Kind,
    required: bool,
}

const fn req(name: &'static str, kind: Kind) -> Arg {
    Arg { name, kind, required: true }
}

const fn opt(name: &'static str, kind: Kind) -> Arg {
    Arg { name, kind, required: false }
}

use Kind::*;

/// Every operation with its named arguments.
const OPS: &[(&str, &[Arg])] = &[
    ("kantorovich_extend", &[req("T", Operator)]),
    ("local_component", &[req("T", Operator), req("x", Vector), opt("y", Vector)]),
    ("ideal_restriction", &[req("T", Operator), req("A", Ideal), opt("at", Vector)]),
    ("minimal_extension", &[req("T", Operator), req("A", Ideal), req("candidates", Operators)]),
    (
        "hb_cone_step",
        &[req("S", Operator), req("Y", Subspace), req("p", Operator), req("x", Vector), opt("policy", Policy)],
    ),
    ("hb_extend_full", &[req("S", Operator), req("Y", Subspace), req("p", Operator), opt("mode", Mode)]),
    ("majorizing_envelope", &[req("T", Operator), req("G", Subspace), opt("mode", Mode)]),
    ("positive_extend_dominated", &[req("S", Operator), req("T", Operator), req("G", Subspace)]),
    ("positive_extension_chain", &[req("S_ext", Operator), req("T", Operator), req("G", Subspace)]),
    ("extreme_point_test", &[req("S", Operator), req("G", Subspace), req("T", Operator)]),
    ("is_in_esub", &[req("S", Operator), req("T", Operator), req("G", Subspace)]),
    ("dominates_on", &[req("p", Operator), req("S", Operator), req("Y", Subspace)]),
    ("is_monotone", &[req("T", Operator)]),
    ("lovasz_extension", &[req("nu", Capacity)]),
    ("choquet_eval", &[req("nu", Capacity), req("x", Vector)]),
    ("evaluate", &[req("T", Operator), req("x", Vector)]),
];

fn signature(op: &str) -> Option<&'static [Arg]> {
    OPS.iter().find(|(name, _)| *name == op).map(|(_, args)| *args)
}

pub fn parse(text: &str) -> Result<ProblemFile, String> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| format!("invalid problem file: {e}"))?;
    file.validate()?;
    Ok(file)
}

impl ProblemFile {
    /// Dimension and uniqueness checks. Task arguments are resolved when the
    /// task runs, so a bad reference only affects its own task.
    pub fn validate(&self) -> Result<(), String> {
        let Space { dim, codim } = self.space;
        for (name, f) in &self.operators {
            if f.in_dim() != dim || f.out_dim() != codim {
                return Err(format!(
                    "operator {name} maps Q^{} to Q^{}, space is Q^{dim} to Q^{codim}",
                    f.in_dim(),
                    f.out_dim()
                ));
            }
        }
        for (name, g) in &self.subspaces {
            if g.dim() != dim {
                return Err(format!("subspace {name} lives in Q^{}, space has dimension {dim}", g.dim()));
            }
        }
        for (name, a) in &self.ideals {
            if a.dim() != dim {
                return Err(format!("ideal {name} lives in Q^{}, space has dimension {dim}", a.dim()));
            }
        }
        for (name, c) in &self.capacities {
            if c.n() != dim {
                return Err(format!("capacity {name} has {} elements, space has dimension {dim}", c.n()));
            }
        }
        let mut ids = BTreeSet::new();
        for t in &self.tasks {
            if !ids.insert(t.id.as_str()) {
                return Err(format!("duplicate task id {}", t.id));
            }
        }
        Ok(())
    }

    /// The normalized text form: sorted declarations, pretty JSON.
    pub fn normalized(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    /// Checks one task's op name and references without running it.
    pub fn resolve(&self, task: &Task) -> Result<(), String> {
        let args = Args::new(self, task)?;
        for a in args.sig {
            if a.required || task.args.contains_key(a.name) {
                match a.kind {
                    Operator => drop(args.form(a.name)?),
                    Operators => drop(args.forms(a.name)?),
                    Subspace => drop(args.subspace(a.name)?),
                    Ideal => drop(args.ideal(a.name)?),
                    Capacity => drop(args.capacity(a.name)?),
                    Vector => drop(args.vector(a.name)?),
                    Policy => drop(args.policy()?),
                    Mode => drop(args.mode()?),
                }
            }
        }
        Ok(())
    }

    /// Hypothesis checks of every declaration, one line each.
    pub fn hypothesis_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, f) in &self.operators {
            let kind = match f {
                Form::MaxLin(_) => "maxlin",
                Form::PosPart(_) => "pospart",
            };
            let monotone = f.is_monotone().holds();
            let positive = ops::is_positive_on_positive_cone(f).map(|v| v.holds());
            out.push(format!(
                "operator {name} kind={kind} monotone={monotone} positive={}",
                positive.map_or_else(|e| format!("error({e})"), |p| p.to_string())
            ));
        }
        for (name, g) in &self.subspaces {
            let riesz = sublinext::lattice::is_riesz_subspace(g).map(|w| w.is_none());
            let major = sublinext::lattice::is_majorizing(g).map(|w| w.is_some());
            out.push(format!(
                "subspace {name} rank={} riesz={} majorizing={}",
                g.rank(),
                riesz.map_or_else(|e| format!("error({e})"), |b| b.to_string()),
                major.map_or_else(|e| format!("error({e})"), |b| b.to_string()),
            ));
        }
        for (name, a) in &self.ideals {
            let coords: Vec<String> = a.coords().iter().map(usize::to_string).collect();
            out.push(format!("ideal {name} coords={{{}}}", coords.join(",")));
        }
        for (name, c) in &self.capacities {
            let sub = match c.is_submodular() {
                Ok(Verdict::Holds) => "true".to_string(),
                Ok(Verdict::Fails((u, v))) => {
                    format!("false witness={},{}", subset_label(u, c.n()), subset_label(v, c.n()))
                }
                Err(e) => format!("error({e})"),
            };
            out.push(format!("capacity {name} n={} submodular={sub}", c.n()));
        }
        out
    }
}

struct Args<'a> {
    file: &'a ProblemFile,
    task: &'a Task,
    sig: &'static [Arg],
}

fn reference<'m, T>(map: &'m BTreeMap<String, T>, v: &Value, what: &str) -> Result<&'m T, String> {
    let name = v.as_str().ok_or_else(|| format!("{what} reference must be a name"))?;
    map.get(name).ok_or_else(|| format!("unresolved name {name:?}"))
}

impl<'a> Args<'a> {
    fn new(file: &'a ProblemFile, task: &'a Task) -> Result<Self, String> {
        let sig = signature(&task.op).ok_or_else(|| format!("unknown op {:?}", task.op))?;
        for k in task.args.keys() {
            if !sig.iter().any(|a| a.name == k) {
                return Err(format!("op {} has no argument {k:?}", task.op));
            }
        }
        Ok(Args { file, task, sig })
    }

    fn raw(&self, name: &str) -> Result<&'a Value, String> {
        self.task
            .args
            .get(name)
            .ok_or_else(|| format!("missing argument {name:?}"))
    }

    fn form(&self, name: &str) -> Result<&'a Form, String> {
        reference(&self.file.operators, self.raw(name)?, "operator")
    }

    fn maxlin(&self, name: &str) -> Result<&'a MaxLinOperator, String> {
        match self.form(name)? {
            Form::MaxLin(t) => Ok(t),
            Form::PosPart(_) => Err(format!("argument {name} must be a maxlin operator")),
        }
    }

    fn forms(&self, name: &str) -> Result<Vec<Form>, String> {
        let list = self
            .raw(name)?
            .as_array()
            .ok_or_else(|| format!("argument {name} must be a list of operator names"))?;
        list.iter()
            .map(|v| reference(&self.file.operators, v, "operator").cloned())
            .collect()
    }

    fn subspace(&self, name: &str) -> Result<&'a SubspaceSpec, String> {
        reference(&self.file.subspaces, self.raw(name)?, "subspace")
    }

    fn ideal(&self, name: &str) -> Result<&'a IdealSpec, String> {
        reference(&self.file.ideals, self.raw(name)?, "ideal")
    }

    fn capacity(&self, name: &str) -> Result<&'a Capacity, String> {
        reference(&self.file.capacities, self.raw(name)?, "capacity")
    }

    fn vector(&self, name: &str) -> Result<Vector, String> {
        let v: Vector =
            serde_json::from_value(self.raw(name)?.clone()).map_err(|e| format!("argument {name}: {e}"))?;
        if v.len() != self.file.space.dim {
            return Err(format!(
                "argument {name} has length {}, space has dimension {}",
                v.len(),
                self.file.space.dim
            ));
        }
        Ok(v)
    }

    fn optional_vector(&self, name: &str) -> Result<Option<Vector>, String> {
        if self.task.args.contains_key(name) {
            self.vector(name).map(Some)
        } else {
            Ok(None)
        }
    }

    fn policy(&self) -> Result<CSelectionPolicy, String> {
        match self.task.args.get("policy") {
            None => Ok(CSelectionPolicy::Min),
            Some(Value::String(s)) => match s.as_str() {
                "min" => Ok(CSelectionPolicy::Min),
                "max" => Ok(CSelectionPolicy::Max),
                "midpoint" => Ok(CSelectionPolicy::Midpoint),
                other => Err(format!("unknown policy {other:?}")),
            },
            Some(v) => serde_json::from_value(v.clone())
                .map(CSelectionPolicy::Given)
                .map_err(|e| format!("policy must be min, max, midpoint or a vector: {e}")),
        }
    }

    fn mode(&self) -> Result<EnvelopeMode, String> {
        match self.task.args.get("mode").map(|v| v.as_str()) {
            None => Ok(EnvelopeMode::Auto),
            Some(Some("auto")) => Ok(EnvelopeMode::Auto),
            Some(Some("explicit")) => Ok(EnvelopeMode::Explicit),
            Some(Some("oracle")) => Ok(EnvelopeMode::Oracle),
            _ => Err("mode must be auto, explicit or oracle".into()),
        }
    }
}

fn form_json(f: &Form) -> String {
    serde_json::to_string(f).expect("operators serialize")
}

fn verdict_values(r: &mut TaskReport, v: &Verdict) {
    r.value("holds", v.holds().to_string());
    if let Some(w) = v.witness() {
        r.value("witness", vector_json(w));
    }
}

fn envelope_artifact(r: &mut TaskReport, name: &str, ext: HbExtension) {
    match &ext.envelope {
        Envelope::Explicit(t) => {
            r.value("mode", "\"explicit\"");
            r.artifact(name, form_json(&Form::MaxLin(t.clone())));
        }
        Envelope::Oracle(_) => r.value("mode", "\"oracle\""),
    }
    r.checks = ext.report;
}

fn dispatch(file: &ProblemFile, task: &Task, cfg: &ProbeConfig) -> Result<TaskReport, String> {
    let a = Args::new(file, task)?;
    let mut r = TaskReport::new(&task.id, &task.op);
    let e = |err: sublinext::Error| err.to_string();
    match task.op.as_str() {
        "kantorovich_extend" => {
            let ext = engine::kantorovich_extend(a.maxlin("T")?, cfg).map_err(e)?;
            r.artifact("S", form_json(&Form::PosPart(ext.operator)));
            r.checks = ext.report;
        }
        "local_component" => {
            let lc = engine::local_component(a.maxlin("T")?, &a.vector("x")?, cfg).map_err(e)?;
            if let Some(y) = a.optional_vector("y")? {
                r.value("S_x(y)", vector_json(&lc.evaluate(&y).map_err(e)?));
                r.value("n_star(y)", lc.n_star(&y).to_string());
            }
            r.artifact("S_x", form_json(&Form::PosPart(lc.form)));
            r.checks = lc.report;
        }
        "ideal_restriction" => {
            let ext = engine::ideal_restriction(a.maxlin("T")?, a.ideal("A")?, cfg).map_err(e)?;
            let f = Form::PosPart(ext.operator);
            if let Some(x) = a.optional_vector("at")? {
                r.value("T_A(at)", vector_json(&f.evaluate(&x).map_err(e)?));
            }
            r.artifact("T_A", form_json(&f));
            r.checks = ext.report;
        }
        "minimal_extension" => {
            let ext =
                engine::minimal_extension(a.maxlin("T")?, a.ideal("A")?, &a.forms("candidates")?, cfg).map_err(e)?;
            r.artifact("T_A", form_json(&Form::PosPart(ext.operator)));
            r.checks = ext.report;
        }
        "hb_cone_step" => {
            let s = DomainedOperator::on_subspace(a.form("S")?.clone(), a.subspace("Y")?).map_err(e)?;
            let step = engine::hb_cone_step(&s, a.form("p")?, &a.vector("x")?, &a.policy()?, cfg).map_err(e)?;
            r.value("m", vector_json(&step.m));
            r.value("c", vector_json(&step.c));
            r.value("p(x)", vector_json(&step.p_x));
            r.artifact("extended", form_json(&step.extended.form));
            r.checks = step.report;
        }
        "hb_extend_full" => {
            let s = DomainedOperator::on_subspace(a.form("S")?.clone(), a.subspace("Y")?).map_err(e)?;
            let ext = engine::hb_extend_full_with(&s, a.form("p")?, cfg, a.mode()?).map_err(e)?;
            envelope_artifact(&mut r, "T", ext);
        }
        "majorizing_envelope" => {
            let ext = engine::majorizing_envelope_with(a.form("T")?, a.subspace("G")?, cfg, a.mode()?).map_err(e)?;
            envelope_artifact(&mut r, "p", ext);
        }
        "positive_extend_dominated" => {
            let ext = engine::positive_extend_dominated(a.form("S")?, a.form("T")?, a.subspace("G")?, cfg)
                .map_err(e)?;
            envelope_artifact(&mut r, "Q", ext);
        }
        "positive_extension_chain" => {
            let ext = engine::positive_extension_chain(a.form("S_ext")?, a.form("T")?, a.subspace("G")?, cfg)
                .map_err(e)?;
            envelope_artifact(&mut r, "R", ext);
        }
        "extreme_point_test" => {
            let res = engine::extreme_point_test(a.form("S")?, a.subspace("G")?, a.form("T")?, cfg).map_err(e)?;
            r.value("verdict", format!("{:?}", format!("{:?}", res.verdict)));
            for (x, g) in &res.values {
                r.value(&format!("g({})", vector_json(x)), vector_json(g));
            }
        }
        "is_in_esub" => {
            let v = engine::is_in_esub(a.form("S")?, a.form("T")?, a.subspace("G")?, cfg).map_err(e)?;
            r.value("holds", v.holds().to_string());
            if let Verdict::Fails(why) = &v {
                r.value("reason", format!("{:?}", why.to_string()));
                if let Some(p) = why.point() {
                    r.value("witness", vector_json(p));
                }
            }
        }
        "dominates_on" => {
            let v = ops::dominates_on(a.form("p")?, a.form("S")?, &a.subspace("Y")?.as_cone()).map_err(e)?;
            verdict_values(&mut r, &v);
        }
        "is_monotone" => {
            let v = a.form("T")?.is_monotone();
            r.value("holds", v.holds().to_string());
            if let Verdict::Fails((lo, hi)) = v {
                r.value("witness", format!("[{},{}]", vector_json(&lo), vector_json(&hi)));
            }
        }
        "lovasz_extension" => {
            let nu = a.capacity("nu")?;
            let l = nu.lovasz_maxlin().map_err(e)?;
            let probes: Vec<Vector> = cfg.points(nu.n(), &[]).iter().map(Vector::abs_val).collect();
            let mut mismatch = Verdict::Holds;
            for x in &probes {
                if l.eval_component(0, x) != nu.choquet_eval(x).map_err(e)? {
                    mismatch = Verdict::Fails(x.clone());
                    break;
                }
            }
            r.artifact("L", form_json(&Form::MaxLin(l)));
            r.checks.record("matches_choquet", mismatch);
        }
        "choquet_eval" => {
            let v = a.capacity("nu")?.choquet_eval(&a.vector("x")?).map_err(e)?;
            r.value("value", format!("{:?}", sublinext::rational::format(&v)));
        }
        "evaluate" => {
            let v = a.form("T")?.evaluate(&a.vector("x")?).map_err(e)?;
            r.value("value", vector_json(&v));
        }
        other => return Err(format!("unknown op {other:?}")),
    }
    Ok(r.settle())
}

/// Runs one task; any input or precondition problem becomes an ERROR entry.
pub fn run_task(file: &ProblemFile, task: &Task, defaults: &ProbeConfig) -> TaskReport {
    let cfg = ProbeConfig::new(task.seed.unwrap_or(defaults.seed), task.samples.unwrap_or(defaults.samples));
    dispatch(file, task, &cfg).unwrap_or_else(|msg| TaskReport::error(&task.id, &task.op, msg))
}

/// Runs the given tasks concurrently; the report keeps their order.
pub fn run_tasks(file: &ProblemFile, tasks: &[&Task], defaults: &ProbeConfig) -> RunReport {
    let reports = tasks.par_iter().map(|t| run_task(file, t, defaults)).collect();
    RunReport {
        seed: defaults.seed,
        samples: defaults.samples,
        tasks: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    const WORKED: &str = r#"{
      "space": {"dim": 2, "codim": 1},
      "operators": {
        "S1": {"kind": "maxlin", "components": [[["1", "0"]]]},
        "p1": {"kind": "maxlin", "components": [[["1","1"],["1","-1"],["-1","1"],["-1","-1"]]]}
      },
      "subspaces": {"Y": {"dim": 2, "basis": [["1", "0"]]}},
      "tasks": [
        {"id": "step", "op": "hb_cone_step", "S": "S1", "Y": "Y", "p": "p1", "x": [0, 1], "policy": "min"},
        {"id": "full", "op": "hb_extend_full", "S": "S1", "Y": "Y", "p": "p1"},
        {"id": "bad", "op": "kantorovich_extend", "T": "Zz"},
        {"id": "nope", "op": "frobnicate"}
      ]
    }"#;

    fn run(id: &str) -> TaskReport {
        let f = parse(WORKED).unwrap();
        run_task(&f, f.task(id).unwrap(), &ProbeConfig::new(0, 20))
    }

    #[test]
    fn worked_cone_step() {
        let r = run("step");
        assert_eq!(r.status, Status::Ok, "{:?}", r);
        assert!(r.values.contains(&("m".into(), r#"["-1"]"#.into())));
        assert!(r.values.contains(&("c".into(), r#"["-1"]"#.into())));
    }

    #[test]
    fn worked_envelope() {
        let r = run("full");
        assert_eq!(r.status, Status::Ok);
        assert_eq!(
            r.artifacts,
            vec![("T".into(), r#"{"kind":"maxlin","components":[[["1","-1"],["1","1"]]]}"#.into())]
        );
    }

    #[test]
    fn errors() {
        let r = run("bad");
        assert_eq!(r.status, Status::Error);
        assert!(r.message.unwrap().contains("unresolved name \"Zz\""));
        assert_eq!(run("nope").status, Status::Error);
    }

    #[test]
    fn normalized_round_trip() {
        let f = parse(WORKED).unwrap();
        let once = f.normalized();
        let twice = parse(&once).unwrap().normalized();
        assert_eq!(once, twice);
    }

    #[test]
    fn dimension_checks() {
        let bad = WORKED.replace(r#""dim": 2, "codim""#, r#""dim": 3, "codim""#);
        assert!(parse(&bad).is_err());
    }
}

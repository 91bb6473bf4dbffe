//! Line-oriented run reports.

use std::fmt::{self, Write as _};

use sublinext::engine::ExtensionReport;
use sublinext::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "OK",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

pub fn vector_json(v: &Vector) -> String {
    serde_json::to_string(v).expect("vectors serialize")
}

/// The outcome of one task: named values and artifacts, then checks.
#[derive(Clone, Debug)]
pub struct TaskReport {
    pub id: String,
    pub op: String,
    pub status: Status,
    pub message: Option<String>,
    /// `(name, json)` pairs: values, then serialized operators.
    pub values: Vec<(String, String)>,
    pub artifacts: Vec<(String, String)>,
    pub checks: ExtensionReport,
}

impl TaskReport {
    pub fn new(id: &str, op: &str) -> Self {
        TaskReport {
            id: id.to_string(),
            op: op.to_string(),
            status: Status::Ok,
            message: None,
            values: Vec::new(),
            artifacts: Vec::new(),
            checks: ExtensionReport::new(),
        }
    }

    pub fn error(id: &str, op: &str, message: impl Into<String>) -> Self {
        TaskReport {
            status: Status::Error,
            message: Some(message.into()),
            ..TaskReport::new(id, op)
        }
    }

    pub fn value(&mut self, name: &str, json: impl Into<String>) {
        self.values.push((name.to_string(), json.into()));
    }

    pub fn artifact(&mut self, name: &str, json: impl Into<String>) {
        self.artifacts.push((name.to_string(), json.into()));
    }

    /// Sets the status from the checks unless the task already errored.
    pub fn settle(mut self) -> Self {
        if self.status == Status::Ok && !self.checks.all_passed() {
            self.status = Status::Fail;
        }
        self
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "task {} op={} status={}", self.id, self.op, self.status);
        if let Some(m) = &self.message {
            let _ = writeln!(out, "  message {m}");
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "  value {k} = {v}");
        }
        for (k, v) in &self.artifacts {
            let _ = writeln!(out, "  artifact {k} = {v}");
        }
        for c in &self.checks.checks {
            let _ = write!(out, "  check {} {}", c.name, if c.passed { "PASS" } else { "FAIL" });
            if let Some(w) = &c.witness {
                let _ = write!(out, " witness={}", vector_json(w));
            }
            out.push('\n');
        }
    }
}

/// Exit code for a set of statuses: 1 if anything failed, 2 if anything
/// errored (and nothing failed), 0 otherwise.
pub fn exit_code<'a>(statuses: impl IntoIterator<Item = &'a Status>) -> i32 {
    let mut code = 0;
    for s in statuses {
        match s {
            Status::Fail => return 1,
            Status::Error => code = 2,
            Status::Ok => {}
        }
    }
    code
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub seed: u64,
    pub samples: usize,
    pub tasks: Vec<TaskReport>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        exit_code(self.tasks.iter().map(|t| &t.status))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sublinext report seed={} samples={}", self.seed, self.samples);
        for t in &self.tasks {
            t.render(&mut out);
        }
        let count = |s: Status| self.tasks.iter().filter(|t| t.status == s).count();
        let _ = writeln!(
            out,
            "summary tasks={} ok={} fail={} error={} exit={}",
            self.tasks.len(),
            count(Status::Ok),
            count(Status::Fail),
            count(Status::Error),
            self.exit_code()
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&[Status::Ok, Status::Ok]), 0);
        assert_eq!(exit_code(&[Status::Ok, Status::Error]), 2);
        assert_eq!(exit_code(&[Status::Error, Status::Fail]), 1);
        assert_eq!(exit_code(&[]), 0);
    }

    #[test]
    fn failing_check_sets_status() {
        let mut t = TaskReport::new("t", "op");
        t.checks.record_bool("a", true);
        assert_eq!(t.clone().settle().status, Status::Ok);
        t.checks.record_bool("b", false);
        let t = t.settle();
        assert_eq!(t.status, Status::Fail);
        let mut s = String::new();
        t.render(&mut s);
        assert_eq!(s, "task t op=op status=FAIL\n  check a PASS\n  check b FAIL\n");
    }
}

//! JSON linear programs for `sublinext lp solve`.
//!
//! ```json
//! {"objective": ["1", "1"],
//!  "constraints": [{"row": ["1", "2"], "rel": "<=", "rhs": "4"}],
//!  "bounds": ["nonneg", "free"]}
//! ```
//!
//! The objective is maximized. `bounds` defaults to all nonnegative.

use std::fmt::Write as _;

use serde::Deserialize;
use sublinext::lp::{solve_lp, verify_certificate, LinProgram, LpResult, Relation, VarBound};
use sublinext::{serde_rational, Rational, Vector};

use crate::report::vector_json;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LpFile {
    objective: Vector,
    #[serde(default)]
    constraints: Vec<RowSpec>,
    bounds: Option<Vec<BoundSpec>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RowSpec {
    row: Vector,
    rel: RelSpec,
    #[serde(with = "serde_rational")]
    rhs: Rational,
}

#[derive(Deserialize)]
enum RelSpec {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum BoundSpec {
    Free,
    Nonneg,
    Nonpos,
}

pub fn parse_lp(text: &str) -> Result<LinProgram, String> {
    let file: LpFile = serde_json::from_str(text).map_err(|e| format!("invalid LP file: {e}"))?;
    let n = file.objective.len();
    let bounds = match file.bounds {
        None => vec![VarBound::NonNeg; n],
        Some(b) if b.len() == n => b
            .into_iter()
            .map(|b| match b {
                BoundSpec::Free => VarBound::Free,
                BoundSpec::Nonneg => VarBound::NonNeg,
                BoundSpec::Nonpos => VarBound::NonPos,
            })
            .collect(),
        Some(b) => return Err(format!("{} bounds for {n} variables", b.len())),
    };
    let mut lp = LinProgram::new(file.objective).with_bounds(bounds);
    for (i, c) in file.constraints.into_iter().enumerate() {
        if c.row.len() != n {
            return Err(format!("constraint {i} has {} entries, expected {n}", c.row.len()));
        }
        let rel = match c.rel {
            RelSpec::Le => Relation::Le,
            RelSpec::Eq => Relation::Eq,
            RelSpec::Ge => Relation::Ge,
        };
        lp.constrain(c.row, rel, c.rhs);
    }
    Ok(lp)
}

/// Solves and renders the result with its certificate. The boolean is
/// whether the certificate verified.
pub fn solve_and_render(lp: &LinProgram) -> Result<(String, bool), String> {
    let r = solve_lp(lp).map_err(|e| e.to_string())?;
    let ok = verify_certificate(lp, &r);
    let mut out = String::new();
    match &r {
        LpResult::Optimal { value, point, dual } => {
            let _ = writeln!(out, "status optimal");
            let _ = writeln!(out, "value {value}");
            let _ = writeln!(out, "point {}", vector_json(point));
            let _ = writeln!(out, "dual {}", vector_json(dual));
        }
        LpResult::Infeasible { farkas } => {
            let _ = writeln!(out, "status infeasible");
            let _ = writeln!(out, "farkas {}", vector_json(farkas));
        }
        LpResult::Unbounded { point, ray } => {
            let _ = writeln!(out, "status unbounded");
            let _ = writeln!(out, "point {}", vector_json(point));
            let _ = writeln!(out, "ray {}", vector_json(ray));
        }
    }
    let _ = writeln!(out, "certificate {}", if ok { "PASS" } else { "FAIL" });
    Ok((out, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_program() {
        let lp = parse_lp(
            r#"{"objective":["1","1"],"constraints":[{"row":[1,2],"rel":"<=","rhs":"4"},{"row":["3","1"],"rel":"<=","rhs":6}]}"#,
        )
        .unwrap();
        let (out, ok) = solve_and_render(&lp).unwrap();
        assert!(ok);
        assert!(out.starts_with("status optimal\nvalue 14/5\n"), "{out}");
    }

    #[test]
    fn reports_infeasible_and_unbounded() {
        let lp = parse_lp(r#"{"objective":[1],"constraints":[{"row":[1],"rel":">=","rhs":2},{"row":[1],"rel":"<=","rhs":1}]}"#)
            .unwrap();
        assert!(solve_and_render(&lp).unwrap().0.starts_with("status infeasible"));
        let lp = parse_lp(r#"{"objective":[1],"bounds":["free"]}"#).unwrap();
        assert!(solve_and_render(&lp).unwrap().0.starts_with("status unbounded"));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(parse_lp(r#"{"objective":[1,2],"constraints":[{"row":[1],"rel":"<=","rhs":1}]}"#).is_err());
        assert!(parse_lp(r#"{"objective":[1],"bounds":["free","free"]}"#).is_err());
        assert!(parse_lp(r#"{"objective":[1],"constraints":[{"row":[1],"rel":"<","rhs":1}]}"#).is_err());
    }
}

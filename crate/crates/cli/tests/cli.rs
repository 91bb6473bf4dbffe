use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sublinext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublinext")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_worked_file() {
    let o = sublinext(&["run", &problem("worked.json"), "--samples", "50"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.starts_with("sublinext report seed=0 samples=50\n"));
    assert!(text.contains("  value m = [\"-1\"]\n  value c = [\"-1\"]\n"));
    assert!(text.contains(r#"artifact T = {"kind":"maxlin","components":[[["1","-1"],["1","1"]]]}"#));
    assert!(text.ends_with("summary tasks=8 ok=8 fail=0 error=0 exit=0\n"));
}

#[test]
fn run_is_deterministic() {
    let args = ["run", &problem("worked.json"), "--seed", "5", "--samples", "30"];
    assert_eq!(sublinext(&args).stdout, sublinext(&args).stdout);
}

#[test]
fn unresolved_name_is_an_error() {
    let o = sublinext(&["run", &problem("broken.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("task missing op=kantorovich_extend status=ERROR\n  message unresolved name \"Zz\""));
    let o = sublinext(&["check", &problem("broken.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_reports_hypotheses() {
    let o = sublinext(&["check", &problem("worked.json")]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("operator p1 kind=maxlin monotone=false positive=true\n"));
    assert!(text.contains("subspace Diag rank=1 riesz=true majorizing=true\n"));
}

#[test]
fn eval_accepts_both_vector_forms() {
    for at in ["3,-2", r#"["3","-2"]"#] {
        let o = sublinext(&["eval", &problem("worked.json"), "--operator", "p1", "--at", at]);
        assert_eq!(stdout(&o), "value [\"5\"]\n");
    }
    let o = sublinext(&["eval", &problem("worked.json"), "--operator", "nope", "--at", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn extend_writes_artifacts() {
    let out = std::env::temp_dir().join(format!("sublinext-extend-{}.json", std::process::id()));
    let o = sublinext(&["extend", &problem("worked.json"), "--task", "major", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    std::fs::remove_file(&out).ok();
    assert_eq!(written, "{\n  \"p\": {\"kind\":\"maxlin\",\"components\":[[[\"0\",\"2\"],[\"2\",\"0\"]]]}\n}\n");
    let o = sublinext(&["extend", &problem("worked.json"), "--task", "absent"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lp_solve() {
    let o = sublinext(&["lp", "solve", &problem("small.lp.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "status optimal\nvalue 14/5\npoint [\"8/5\",\"6/5\"]\ndual [\"2/5\",\"1/5\"]\ncertificate PASS\n"
    );
}

#[test]
fn verify_exit_codes() {
    let o = sublinext(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sublinext(&["verify", "--suite", "thm36", "--seed", "7", "--samples", "200"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.starts_with("sublinext verify suite=thm36 seed=7 samples=200\n"));
    assert!(text.contains("suite thm36 cases=100 pass=100 fail=0\n"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sublinext(&["frobnicate"]).status.code(), Some(2));
}

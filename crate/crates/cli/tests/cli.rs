use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn argtab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argtab"))
        .args(args)
        .env_remove("ARGTAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn chain_is_justified() {
    let f = fixture("chain.kb");
    let o = argtab(&[f.to_str().unwrap(), "--mode", "defeasible"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("query s: justified"));
    assert!(out.contains("        ~q\n        p | q\n      |- p ~> r\n    |- r ~> s\n  |- s\n"));
}

#[test]
fn extra_query_from_flag() {
    let f = fixture("chain.kb");
    let o = argtab(&[f.to_str().unwrap(), "--query", "p", "--mode", "classic"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("query s: unsupported"));
    assert!(out.contains("query p: justified"));
}

#[test]
fn malformed_input_exits_two() {
    let f = fixture("broken.kb");
    let o = argtab(&[f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.kb"));
    let o = argtab(&["/nonexistent/file.kb"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_budget_and_query_exit_two() {
    let f = fixture("chain.kb");
    assert_eq!(argtab(&[f.to_str().unwrap(), "--budget", "depth_cap=0"]).status.code(), Some(2));
    assert_eq!(argtab(&[f.to_str().unwrap(), "--query", "p |"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let f = fixture("skolem.kb");
    let o = argtab(&[f.to_str().unwrap(), "--mode", "classic"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("complete: no"));
}

#[test]
fn env_budget_is_applied_before_flag() {
    let f = fixture("chain.kb");
    let run = |env: &str, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_argtab"));
        c.arg(f.to_str().unwrap()).args(extra).env("ARGTAB_BUDGET", env);
        c.output().unwrap()
    };
    let o = run("depth_cap=1", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("depth_cap"));
    let o = run("depth_cap=1", &["--budget", "depth_cap=5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run("nonsense", &[]).status.code(), Some(2));
}

#[test]
fn cases_report_lists_local_closure() {
    let f = fixture("local_closure.kb");
    let o = argtab(&[f.to_str().unwrap(), "--mode", "cases"]);
    let out = stdout(&o);
    assert!(out.contains("local closures:\n  ({~(p & q), ({t}, t ~> q), ({r | s}, r ~> p)}, false)\n"));
    assert!(out.contains("({~(p & q), ({t}, t ~> q)}, not(a))"));
    assert!(out.contains("({~(p & q), ({r | s}, r ~> p)}, not(b))"));
}

#[test]
fn json_schema() {
    let f = fixture("party.kb");
    let o = argtab(&[f.to_str().unwrap(), "--mode", "cases", "--emit", "json"]);
    let out = stdout(&o);
    assert!(out.contains("\"schema\": 1"));
    assert!(out.contains("\"status\": \"defensible\""));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_and_apx() {
    let f = fixture("chain.kb");
    let o = argtab(&[f.to_str().unwrap(), "--emit", "dot"]);
    assert!(stdout(&o).starts_with("digraph tableau {"));
    let f = fixture("party.kb");
    let o = argtab(&[f.to_str().unwrap(), "--mode", "cases", "--emit", "apx"]);
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("arg(") || l.starts_with("att(")));
    assert!(out.contains("att("));
}

#[test]
fn semantics_flag() {
    let f = fixture("party.kb");
    let o = argtab(&[f.to_str().unwrap(), "--semantics", "preferred"]);
    assert!(stdout(&o).contains("semantics: preferred"));
    assert_eq!(argtab(&[f.to_str().unwrap(), "--semantics", "ideal"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let f = fixture("harry_draco.kb");
    for mode in ["defeasible", "cases"] {
        for emit in ["text", "json", "apx"] {
            let a = argtab(&[f.to_str().unwrap(), "--mode", mode, "--emit", emit]);
            let b = argtab(&[f.to_str().unwrap(), "--mode", mode, "--emit", emit]);
            assert_eq!(a.stdout, b.stdout);
            assert_eq!(a.status.code(), b.status.code());
        }
    }
}

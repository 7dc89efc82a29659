use std::path::Path;
use std::process::{Command, Output};

fn symmkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symmkit")).args(args).output().expect("run symmkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn without_header(report: &str) -> String {
    report.lines().skip(1).collect::<Vec<_>>().join("\n")
}

#[test]
fn propagate_lexred_fixes_only_x4() {
    let o = symmkit(&["propagate", "lexred", "--domains", "{0} [-1,0] {1} [-1,1]", "--perm", "(1,3,2,4)"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("after:  {0} × [-1,0] × {1} × {-1}"), "{out}");
    let changed: Vec<&str> = out.lines().filter(|l| l.starts_with('x')).collect();
    assert_eq!(changed, ["x4 ∈ {-1}"]);
}

#[test]
fn propagate_orbitope_reports_status() {
    let o = symmkit(&["propagate", "orbitope", "--p", "1", "--q", "2", "--domains", "0 1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("status: infeasible"));
    let bad = symmkit(&["propagate", "orbitope", "--p", "2", "--q", "2", "--domains", "0 1"]);
    assert!(!bad.status.success());
}

#[test]
fn solve_reports_optimum_and_is_deterministic() {
    let args = ["solve", "ndb_toy", "--shc", "orbitope", "--placement", "median"];
    let a = symmkit(&args);
    let b = symmkit(&args);
    assert!(a.status.success());
    let out = stdout(&a);
    assert!(out.contains("objective: 3"), "{out}");
    assert!(out.contains("reductions: model="));
    assert_eq!(without_header(&out), without_header(&stdout(&b)));
}

#[test]
fn solve_infeasible() {
    let o = symmkit(&["solve", "infeasible_toy"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("status: infeasible"));
}

#[test]
fn exit_codes() {
    let limit = symmkit(&["solve", "ndb_toy", "--node-limit", "2"]);
    assert_eq!(limit.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let parse = symmkit(&["solve", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));

    let domains = symmkit(&["propagate", "lexred", "--domains", "[0,x]", "--perm", "(1,2)"]);
    assert_eq!(domains.status.code(), Some(2));

    let invalid = symmkit(&["solve", "ndb_toy", "--shc", "orbital"]);
    assert_eq!(invalid.status.code(), Some(1));

    let missing = symmkit(&["solve", "no_such_instance"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn emitted_tree_passes_audit() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    let t = tree.to_str().unwrap();
    for shc in ["lexred", "orbital+lexred", "orbitope"] {
        let o = symmkit(&["solve", "ndb_toy", "--shc", shc, "--no-bound-pruning", "--emit-tree", t]);
        assert!(o.status.success(), "{shc}");
        let a = symmkit(&["audit", "ndb_toy", "--tree", t]);
        let out = stdout(&a);
        assert!(a.status.success(), "{shc}: {out}");
        for c in ["C1: pass", "C2: pass", "C3: pass", "C4: pass"] {
            assert!(out.contains(c), "{shc}: {out}");
        }
    }
}

#[test]
fn generate_writes_loadable_instances() {
    let dir = tempfile::tempdir().unwrap();
    let cov = dir.path().join("cov.json");
    let o = symmkit(&[
        "generate",
        "covering",
        "--t",
        "2",
        "--v",
        "4",
        "--k",
        "3",
        "--lambda",
        "2",
        "-o",
        cov.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let s = symmkit(&["solve", cov.to_str().unwrap(), "--shc", "orbital+lexred"]);
    assert!(stdout(&s).contains("status: optimal"));

    let noise = ["generate", "noise", "--p", "3", "--q", "4", "--seed", "7"];
    let a = symmkit(&noise);
    let b = symmkit(&noise);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = symmkit(&["generate", "noise", "--p", "3", "--q", "4", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);

    let demo = symmkit(&["generate", "ndb-demo"]);
    assert!(stdout(&demo).contains("\"ndb_toy\""));
}

#[test]
fn bench_prints_tables_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    std::fs::write(
        &manifest,
        r#"{"instances":["ndb_toy","covering_2_4_3_2"],
            "configs":[{"name":"nosym"},{"name":"orbital","shc":"orbital+lexred"}],
            "seeds":[0,1,2],"time_limit":10}"#,
    )
    .unwrap();
    let csv = dir.path().join("runs.csv");
    let o = symmkit(&["bench", manifest.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    for subset in ["all ", "some ", "all-solved "] {
        assert!(out.lines().any(|l| l.starts_with(subset)), "{out}");
    }
    let rows = std::fs::read_to_string(Path::new(&csv)).unwrap();
    assert_eq!(rows.lines().count(), 1 + 2 * 2 * 3);
}

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn regcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regcount")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

const C4: &str = "4 4 0\n0 1\n1 2\n2 3\n3 0\n";

#[test]
fn count_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.txt");
    fs::write(&path, C4).unwrap();
    let p = path.to_str().unwrap();
    let m = regcount(&["count", "--kind", "matching", "--graph", p]);
    assert_eq!(m.status.code(), Some(0));
    assert_eq!(stdout(&m).trim(), r#"["1","4","2"]"#);
    let i = regcount(&["count", "--kind", "independent-set", "--graph", p]);
    assert_eq!(stdout(&i).trim(), r#"["1","4","2"]"#);
}

#[test]
fn count_several_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.txt");
    fs::write(&path, format!("{C4}---\n3 3 0\n0 1\n1 2\n2 0\n")).unwrap();
    let o = regcount(&["count", "--kind", "matching", "--graph", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "[\"1\",\"4\",\"2\"]\n[\"1\",\"3\"]\n");
}

#[test]
fn umc_spot_check() {
    let o = regcount(&["verify-umc", "--n", "8", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[0]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(lines[16]["summary"]["records"], 15);
    assert!(lines[1..16].iter().all(|v| v["pass"] == true));
}

#[test]
fn bounds_spot_check() {
    let o = regcount(&["bounds", "--n", "8", "--d", "2", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let upper = json_lines(&o).into_iter().find(|v| v["bound"] == "match-upper").unwrap();
    assert_eq!(upper["value"], "6");
    assert_eq!(upper["reference"], "m(DK)=20");
    let exact = upper["reference_log2"].as_f64().unwrap();
    assert!((exact - 20f64.log2()).abs() < 1e-10);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["verify-suite", "--n", "8", "--d", "2", "--lambda", "1/2,2", "--c", "2"];
    let a = regcount(&args);
    let b = regcount(&[&args[..], &["--workers", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kahn.csv");
    let o = regcount(&["verify-kahn", "--n", "6", "--d", "3", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {\"config\""));
    assert!(lines.next().unwrap().starts_with("# {\"summary\""));
    assert_eq!(lines.next().unwrap(), "check_id,graph_label,params,lhs,rhs,pass,margin");
    assert!(lines.all(|l| l.starts_with("kahn,")));
}

#[test]
fn gen_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = regcount(&["gen", "--n", "8", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let graphs = regcount::graph::parse_graphs(&stdout(&o)).unwrap();
    assert_eq!(graphs.len(), 6);
    let o = regcount(&["gen", "--n", "8", "--d", "3", "--bipartite", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn roots_and_hom_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.txt");
    fs::write(&path, C4).unwrap();
    let p = path.to_str().unwrap();
    let r = regcount(&["verify-roots", "--graph", p]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(json_lines(&r)[1]["check_id"], "real-rooted");
    let h = regcount(&["verify-hom", "--graph", p, "--orders", "3", "--seed", "7"]);
    assert_eq!(h.status.code(), Some(0));
}

#[test]
fn usage_and_precondition_errors_exit_one() {
    for args in [
        &["bogus"][..],
        &["verify-umc", "--n", "8"],
        &["verify-umc", "--n", "6", "--d", "2"],
        &["gen", "--n", "7", "--d", "3"],
        &["gen", "--n", "20", "--d", "3"],
        &["count", "--kind", "matching", "--graph", "/nonexistent/graph.txt"],
        &["verify-suite", "--n", "8", "--d", "2", "--lambda", "x"],
        &["verify-roots", "--n", "8", "--d", "2", "--tol", "0"],
    ] {
        let o = regcount(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn malformed_graph_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "3 1 0\n0 5\n").unwrap();
    let o = regcount(&["count", "--kind", "matching", "--graph", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("5"), "{err}");
}

#[test]
fn precondition_messages_are_distinct() {
    let div = regcount(&["verify-umc", "--n", "6", "--d", "2"]);
    let par = regcount(&["gen", "--n", "7", "--d", "3"]);
    let scale = regcount(&["gen", "--n", "20", "--d", "3"]);
    let msgs: Vec<String> = [div, par, scale].iter().map(|o| String::from_utf8(o.stderr.clone()).unwrap()).collect();
    assert!(msgs[0].contains("divisib"));
    assert!(msgs[1].contains("parity"));
    assert!(msgs[2].contains("scale"));
}

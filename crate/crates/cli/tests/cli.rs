use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use flowforge::format::{parse, Format};

const TRIANGLE: &str = r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#;
const K4: &str = r#"{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flowforge"))
        .args(args)
        .env("FLOWFORGE_THREADS", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decide_triangle() {
    let z3 = run(&["--json", "decide", "z3"], TRIANGLE);
    assert_eq!(code(&z3), 1);
    assert_eq!(stdout_json(&z3)["certificate"]["witness"], serde_json::json!([1, 1, 1]));

    let mod3 = run(&["--json", "decide", "mod3"], TRIANGLE);
    assert_eq!(code(&mod3), 0);
    assert_eq!(stdout_json(&mod3)["answer"], true);

    assert_eq!(code(&run(&["decide", "extendable@0"], TRIANGLE)), 1);
    assert_eq!(code(&run(&["decide", "z3"], r#"{"n":2,"edges":[[0,1],[1,0]]}"#)), 0);
    assert_eq!(code(&run(&["decide", "mod3"], K4)), 1);
}

#[test]
fn errors_exit_two() {
    assert_eq!(code(&run(&["decide", "z3"], "not json")), 2);
    assert_eq!(code(&run(&["decide", "nonsense"], TRIANGLE)), 2);
    assert_eq!(code(&run(&["analyze", "--budget-n", "3"], K4)), 2);
    assert_eq!(code(&run(&["decide", "strong-zm", "--modulus", "4"], K4)), 2);
}

#[test]
fn construct_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.json", K4);
    let cases: Vec<(Vec<&str>, (usize, usize))> = vec![
        (vec!["construct", "jaeger"], (12, 24)),
        (vec!["construct", "two-sum", "--g1", &k4, "--edge", "0", "--g2", &k4, "--anchors", "2", "3"], (6, 11)),
        (vec!["construct", "kochol", "--input", &k4, "--v", "0", "--v1", "1", "--v2", "2"], (22, 39)),
        (vec!["construct", "h-gadget", "--input", &k4, "--u", "0", "1", "--w", "2", "3"], (6, 10)),
        (vec!["construct", "subdivide-identify", "--input", &k4, "--edges", "0,1,2"], (5, 9)),
    ];
    for (args, size) in cases {
        let o = run(&args, "");
        assert_eq!(code(&o), 0, "{args:?}");
        let g = parse(std::str::from_utf8(&o.stdout).unwrap(), Format::JsonEdgeList).unwrap();
        assert_eq!((g.n(), g.m()), size, "{args:?}");
    }
    let graph6 = run(&["construct", "jaeger", "--output-format", "graph6"], "");
    assert_eq!(code(&graph6), 0);
    let g = parse(std::str::from_utf8(&graph6.stdout).unwrap(), Format::Graph6).unwrap();
    assert_eq!((g.n(), g.m()), (12, 24));
}

#[test]
fn analyze_report_replays() {
    let jaeger = run(&["construct", "jaeger"], "");
    let text = String::from_utf8(jaeger.stdout).unwrap();
    let o = run(&["--json", "analyze"], &text);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["edge_connectivity"]["value"], 4);
    assert_eq!(r["tree_packing_number"], 2);
    assert_eq!(r["z3_connected"], false);
    assert_eq!(r["reduced"], true);
    // The cut certificate recounts against the input graph.
    let g = parse(&text, Format::JsonEdgeList).unwrap();
    let side: Vec<usize> = serde_json::from_value(r["edge_connectivity"]["side"].clone()).unwrap();
    assert_eq!(g.edge_cut(&side).unwrap().value(), 4);
    // Same flags, same bytes.
    assert_eq!(run(&["--json", "analyze"], &text).stdout, o.stdout);
}

#[test]
fn verify_and_search() {
    let v = run(&["--json", "verify", "lemma-2sum", "--seed", "3", "--count", "10"], "");
    assert_eq!(code(&v), 0);
    assert_eq!(stdout_json(&v)["examined"], 10);

    let s = run(&["search", "reduced-min-degree-5", "--budget", "0"], "");
    assert_eq!(code(&s), 0);
    assert!(String::from_utf8(s.stdout).unwrap().contains("none in budget"));

    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("journal.txt");
    let args = ["--json", "search", "non-z3-5ec", "--seed", "1", "--budget", "4", "--max-n", "6", "--journal", journal.to_str().unwrap()];
    let first = run(&args, "");
    assert_ne!(code(&first), 2);
    let resumed = stdout_json(&run(&args, ""));
    assert_eq!(resumed["journal_loaded"], stdout_json(&first)["examined"]);
}

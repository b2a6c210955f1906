//! Gadget outputs and the J report frozen as files under tests/golden.

use std::path::PathBuf;

use serde_json::Value;

use flowforge::format::{parse, to_json_value, Format};
use flowforge::gadgets::{g_star, h_gadget, jaeger_graph, kochol_composite, subdivide_identify, two_sum};
use flowforge::orient::z3_connected;
use flowforge::report::{analyze, Budget};
use flowforge::Multigraph;

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn golden_graph(name: &str) -> Multigraph {
    parse(&golden(name), Format::JsonEdgeList).unwrap()
}

fn doubled_triangle() -> Multigraph {
    Multigraph::new(3, vec![(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)]).unwrap()
}

#[test]
fn gadget_outputs_match() {
    let k4 = Multigraph::complete(4);
    let kochol = kochol_composite(&doubled_triangle(), 0, 1, 2).unwrap();
    let cases = [
        ("jaeger.json", jaeger_graph()),
        ("two_sum_k4_k4.json", two_sum(&k4, 0, &k4, 2, 3).unwrap().graph),
        ("kochol_doubled_triangle.json", kochol.g),
        ("kochol_block_doubled_triangle.json", kochol.j),
        ("h_gadget_k4.json", h_gadget(&k4, (0, 1), (2, 3)).unwrap().graph),
        ("g_star_k2.json", g_star(&Multigraph::complete(2), (0, 1), (0, 1)).unwrap()),
        ("subdivide_identify_k4.json", subdivide_identify(&k4, &[0, 1, 2]).unwrap().0),
    ];
    for (name, g) in cases {
        assert_eq!(g, golden_graph(name), "{name}");
    }
}

#[test]
fn golden_sizes() {
    let sizes = |name: &str| {
        let g = golden_graph(name);
        (g.n(), g.m())
    };
    assert_eq!(sizes("jaeger.json"), (12, 24));
    assert_eq!(sizes("two_sum_k4_k4.json"), (6, 11));
    assert_eq!(sizes("kochol_doubled_triangle.json"), (16, 33));
    assert_eq!(sizes("h_gadget_k4.json"), (6, 10));
    assert_eq!(sizes("g_star_k2.json"), (24, 48));
    assert_eq!(sizes("subdivide_identify_k4.json"), (5, 9));
}

#[test]
fn non_z3_golden_graphs() {
    for name in ["jaeger.json", "two_sum_k4_k4.json", "kochol_doubled_triangle.json"] {
        assert!(!z3_connected(&golden_graph(name)), "{name}");
    }
}

#[test]
fn jaeger_report_matches() {
    let expected: Value = serde_json::from_str(&golden("jaeger_report.json")).unwrap();
    let report = analyze(&jaeger_graph(), &[4], Budget::default()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), expected);
    assert_eq!(to_json_value(&jaeger_graph()), serde_json::from_str::<Value>(&golden("jaeger.json")).unwrap());
}

use std::fs;
use std::path::PathBuf;

use aligning::format::{graph_to_json, parse_graph};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("aligning").chain(args.iter().copied());
    let code = aligning_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn analyze_reports_unaligned_two_gon() {
    let (code, out, _) = run(&["analyze", &fixture("twogon.graph")]);
    assert_eq!(code, 0);
    assert!(out.contains("aligned: false"));
    assert!(out.contains("e-strong level: none"));
    let (_, out, _) = run(&["analyze", &fixture("twogon_aligned.graph")]);
    assert!(out.contains("aligned: true"));
    assert!(out.contains("primitive x, multiplicities (1,3)"));
    assert!(out.contains("e-strong level: 3"));
}

#[test]
fn analyze_formats() {
    let (code, out, _) = run(&["analyze", &fixture("theta.graph"), "--format", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["alignment"]["aligned"], false);
    assert_eq!(value["betti_number"], 2);
    let (_, out, _) = run(&["analyze", &fixture("theta.graph"), "--format", "dot"]);
    assert!(out.starts_with("graph "));
}

#[test]
fn thickness_validation_and_enumeration() {
    let (code, out, _) = run(&["thickness", &fixture("theta.graph"), "--max", "1", "--validate", "0,1,2"]);
    assert_eq!((code, out.as_str()), (0, "(0,1,2): invalid\n"));
    let (_, out, _) = run(&["thickness", &fixture("theta.graph"), "--validate", "0,1,1"]);
    assert_eq!(out, "(0,1,1): valid\n");
    let (_, out, _) = run(&["thickness", &fixture("twogon.graph"), "--max", "1"]);
    assert_eq!(out, "4 thickness functions with values at most 1\n(0,0)\n(0,1)\n(1,0)\n(1,1)\n");
    let (code, _, err) = run(&["thickness", &fixture("theta.graph"), "--validate", "0,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("expected 3 thickness values"));
}

#[test]
fn trait_prints_canonical_function() {
    let (code, out, _) = run(&["trait", &fixture("twogon.graph"), "--valuation", "x=4,y=6"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("canonical: (2,3)\n"));
    assert!(out.contains("t = 2 on {e1,e2}"));
    assert!(out.contains("separatedness: ok"));
    let (code, _, _) = run(&["trait", &fixture("twogon.graph"), "--valuation", "x=4,w=6"]);
    assert_eq!(code, 2);
}

#[test]
fn atlas_writes_directory_and_fibre_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("atlas");
    let (code, out, _) = run(&[
        "atlas",
        &fixture("twogon.graph"),
        "--max",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
        "--vanishing",
        "x,y",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("6 charts, 15 overlaps"));
    assert!(out.contains("closed fibre at {x,y}: 3 charts with non-empty fibre"));
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("atlas.index")).unwrap()).unwrap();
    assert_eq!(index["charts"].as_array().unwrap().len(), 6);
    assert_eq!(index["overlaps"].as_array().unwrap().len(), 15);
    let chart: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("chart_0004.json")).unwrap()).unwrap();
    assert_eq!(chart["rendered"][1], "y = a[e1]^2 * u[e2]");
    assert!(fs::read_to_string(out_dir.join("chart_0004.txt")).unwrap().contains("1 = u[e1]"));
}

#[test]
fn failed_atlas_leaves_no_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("atlas");
    // labels are not single generators, so the fibre summary is refused
    let (code, _, err) = run(&[
        "atlas",
        &fixture("twogon_aligned.graph"),
        "--max",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
        "--vanishing",
        "x",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("warning: base is not normal-crossings"));
    assert!(!out_dir.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn atlas_refuses_occupied_output() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("keep"), "x").unwrap();
    let (code, _, _) = run(&["atlas", &fixture("twogon.graph"), "--max", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(fs::read_to_string(dir.path().join("keep")).unwrap(), "x");
}

#[test]
fn resolve_and_strata() {
    let (code, out, _) = run(&["resolve", &fixture("edge_x4.graph"), "--valuation", "x=1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 steps\n"));
    assert!(out.contains("step 2: delta 0, 5 vertices, 4 edges"));
    let dir = tempfile::tempdir().unwrap();
    let trace_dir = dir.path().join("trace");
    let (code, _, _) =
        run(&["resolve", &fixture("twogon_aligned.graph"), "--valuation", "x=1", "--out", trace_dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let last = parse_graph(&fs::read_to_string(trace_dir.join("step_001.graph")).unwrap()).unwrap();
    assert_eq!(last.edge_count(), 4);

    let (code, out, _) = run(&["strata", &fixture("twogon.graph")]);
    assert_eq!(code, 0);
    assert!(out.contains("{x}: 1 vertices, 1 edges [e1: x]"));
    assert!(out.contains("controlling: passed"));
    let (_, out, _) = run(&["strata", &fixture("twogon.graph"), "--format", "dot"]);
    assert!(out.contains("\"{x,y}\" -> \"{x}\";"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    fs::write(&bad, "{\n  \"generators\": [\"x\"],\n  \"vertices\": [\"a\"],\n  \"edges\": [{\"id\": \"e1\", \"ends\": [\"a\", \"b\"], \"label\": {}}]\n}\n").unwrap();
    let (code, _, err) = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");
    let (code, _, _) = run(&["analyze", dir.path().join("missing.graph").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(run(&["strata", &fixture("twogon_aligned.graph")]).0, 2);
    assert_eq!(run(&["resolve", &fixture("twogon.graph"), "--valuation", "x=1,y=1"]).0, 2);
    assert_eq!(run(&["resolve", &fixture("edge_x4.graph"), "--valuation", "x=2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn fixtures_are_canonical() {
    for entry in fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        assert_eq!(graph_to_json(&parse_graph(&text).unwrap()), text);
    }
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn dessins(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dessins"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = dessins(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tetrahedron_info() {
    let v = json_ok(&["info", path(&data("tetrahedron.json"))]);
    assert_eq!(v["regular"], true);
    assert_eq!(v["group_order"], 12);
    assert_eq!(v["automorphisms"], 12);
    assert_eq!(v["genus"], 0);
}

#[test]
fn gt_two_is_trivial() {
    let v = json_ok(&["gt", "2"]);
    assert_eq!(v["gt_size"], 1);
    assert_eq!(v["hn_order"], 4);
}

#[test]
fn gt_three_has_two_elements() {
    let v = json_ok(&["gt", "3"]);
    assert_eq!(v["gt_size"], 2);
    let mut ks: Vec<u64> = v["elements"].as_array().unwrap().iter().map(|e| e["k_character"].as_u64().unwrap()).collect();
    ks.sort();
    assert_eq!(ks, vec![1, 2]);
}

#[test]
fn path_fraction_verifies() {
    let v = json_ok(&["belyi", "verify", path(&data("path2.json")), path(&data("path2-fraction.json"))]);
    assert_eq!(v["isomorphic"], true);
}

#[test]
fn tree_route_matches_the_fraction_file() {
    let v = json_ok(&["belyi", "tree", path(&data("path2.json"))]);
    assert_eq!(v["matches_input"], true);
    assert_eq!(v["seed"], 0);
    let num = v["fraction"]["num"].as_array().unwrap();
    assert!((num[1][0].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((num[2][0].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn solve_is_deterministic_and_records_the_seed() {
    let args = ["belyi", "solve", "--passport", "2,1,1/2,2/4", "--seed", "5"];
    let a = dessins(&args);
    let b = dessins(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert!(v["count"].as_u64().unwrap() >= 1);
    for c in v["candidates"].as_array().unwrap() {
        assert_eq!(c["monodromy"]["n"], 4);
    }
}

#[test]
fn exact_mode_snaps_the_cube() {
    let v = json_ok(&["belyi", "solve", "--passport", "3/1,1,1/3", "--exact"]);
    let c = &v["candidates"][0];
    assert_eq!(c["exact"]["belyi"], true);
    assert_eq!(c["exact"]["fraction"]["num"], serde_json::json!(["0", "0", "0", "1"]));
}

#[test]
fn dual_round_trips_through_both_formats() {
    let t = data("tetrahedron.json");
    let out = dessins(&["dual", path(&t)]);
    let d = dessins_core::dessin_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let text = dessins(&["dual", path(&t), "--format", "text"]);
    let e = dessins_core::dessin_from_text(std::str::from_utf8(&text.stdout).unwrap()).unwrap();
    assert_eq!(d, e);
    let orig = dessins_core::dessin_from_json(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert!(d.dual().is_isomorphic(&orig).is_some());
}

#[test]
fn act_by_theta_swaps_colours() {
    let v = json_ok(&["act", "--level", "2", "--auto", "theta", path(&data("path2.json"))]);
    let d = dessins_core::dessin_from_json(&v.to_string()).unwrap();
    let p = dessins_core::dessin_from_json(&std::fs::read_to_string(data("path2.json")).unwrap()).unwrap();
    assert!(d.is_isomorphic(&p.swap_colors()).is_some());
}

#[test]
fn enumeration_streams_lines_and_fills_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dessins"))
        .args(["enumerate", "4"])
        .env("DESSINS_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 26);
    for l in &lines {
        dessins_core::dessin_from_json(l).unwrap();
    }
    assert!(dir.path().join("catalog-4.json").exists());
}

#[test]
fn closure_and_quotient() {
    let v = json_ok(&["closure", path(&data("path2.json"))]);
    assert_eq!(v["order"], 2);
    let q = json_ok(&["quotient", path(&data("tetrahedron.json")), "--subgroup", "s"]);
    let d = dessins_core::dessin_from_json(&q.to_string()).unwrap();
    assert_eq!(d.degree(), 4);
}

#[test]
fn precondition_violations_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("two.json");
    std::fs::write(&f, r#"{"n": 2, "sigma": [], "alpha": []}"#).unwrap();
    let out = dessins(&["closure", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "disconnected");

    let out = dessins(&["belyi", "tree", path(&data("tetrahedron.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_a_tree");

    let out = dessins(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn caps_exit_with_two() {
    let out = dessins(&["enumerate", "9", "--no-cache"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "cap_exceeded");
    assert_eq!(dessins(&["hn", "6"]).status.code(), Some(2));
}

#[test]
fn svg_has_a_polyline_per_dart() {
    let out = dessins(&["belyi", "svg", path(&data("path2-fraction.json")), "--samples", "8"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("<svg"));
    assert_eq!(s.matches("<polyline").count(), 2);
}

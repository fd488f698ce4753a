use std::process::{Command, Output};

use serde_json::{json, Value};
use tubings_core::{Graph, NodeSet, Tubing};

fn tubings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tubings"))
        .args(args)
        .env_remove("TUBINGS_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = tubings(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tubing(g: Graph, tubes: &[&[usize]]) -> String {
    let t = Tubing::new(g, tubes.iter().map(|t| NodeSet::from_nodes(t.iter().copied()))).unwrap();
    serde_json::to_string(&t).unwrap()
}

#[test]
fn fvectors_of_small_graphs() {
    assert_eq!(ok_json(&["fvector", "K3"])["f_vector"], json!([6, 6, 1]));
    assert_eq!(ok_json(&["fvector", "L3"])["f_vector"], json!([5, 5, 1]));
    assert_eq!(ok_json(&["fvector", "K4"])["f_vector"], json!([24, 36, 14, 1]));
    assert_eq!(ok_json(&["fvector", "L4"])["f_vector"], json!([14, 21, 9, 1]));
    assert_eq!(ok_json(&["fvector", "Cy4"])["f_vector"], json!([20, 30, 12, 1]));
    let g = r#"{"n":3,"edges":[[1,2],[2,3]]}"#;
    assert_eq!(ok_json(&["fvector", g])["total"], json!(11));
}

#[test]
fn enumerate_lists_every_tubing_once() {
    let v = ok_json(&["enumerate", "K3"]);
    assert_eq!(v["count"], json!(13));
    let list = v["tubings"].as_array().unwrap();
    let mut seen: Vec<String> = list.iter().map(|t| t.to_string()).collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 13);
}

#[test]
fn boundary_of_a_vertex_is_empty() {
    let t = tubing(Graph::linear(3), &[&[1], &[1, 2], &[1, 2, 3]]);
    assert_eq!(ok_json(&["boundary", &t])["boundary"], json!([]));
}

#[test]
fn boundary_of_an_edge_is_two_vertices() {
    let t = tubing(Graph::linear(3), &[&[1], &[1, 2, 3]]);
    let v = ok_json(&["boundary", &t]);
    let terms = v["boundary"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    let coeffs: i64 = terms.iter().map(|x| x["coeff"].as_i64().unwrap()).sum();
    assert_eq!(coeffs, 0);
}

#[test]
fn k8_full_substitution() {
    let base = tubing(Graph::complete(8), &[&[3], &[2, 3, 6, 7], &[2, 3, 5, 6, 7, 8], &[1, 2, 3, 4, 5, 6, 7, 8]]);
    let slots = format!(
        "[{},{},{},{}]",
        tubing(Graph::complete(2), &[&[2], &[1, 2]]),
        tubing(Graph::complete(1), &[&[1]]),
        tubing(Graph::complete(3), &[&[2], &[1, 2], &[1, 2, 3]]),
        tubing(Graph::complete(2), &[&[1], &[1, 2]]),
    );
    let v = ok_json(&["substitute", &base, "--full", &slots]);
    assert_eq!(v["surjection"], json!([8, 3, 1, 7, 5, 2, 4, 6]));
    assert_eq!(v["tubing"]["tubes"].as_array().unwrap().len(), 8);
}

#[test]
fn k6_slot_substitution() {
    let base = tubing(Graph::complete(6), &[&[1, 4], &[1, 3, 4, 6], &[1, 2, 3, 4, 5, 6]]);
    let s = tubing(Graph::complete(2), &[&[2], &[1, 2]]);
    let v = ok_json(&["substitute", &base, "--slot", "1,3,4,6", "--insert", &s]);
    assert_eq!(v["surjection"], json!([1, 4, 3, 1, 4, 2]));
}

#[test]
fn coproduct_has_unit_terms() {
    let t = tubing(Graph::linear(2), &[&[1], &[1, 2]]);
    let v = ok_json(&["coproduct", &t]);
    let terms = v["coproduct"].as_array().unwrap();
    assert!(terms.iter().any(|x| x["left"] == json!("unit")));
    assert!(terms.iter().any(|x| x["right"] == json!("unit")));
}

#[test]
fn dtub_products_and_differential() {
    let p = r#"{"components":[{"graph":{"n":1,"edges":[]},"tubes":[[1]],"reduced":false}]}"#;
    let v = ok_json(&["dtub", "times", p, p]);
    assert_eq!(v["op"], json!("×"));
    let prod = &v["result"].as_array().unwrap()[0];
    assert_eq!(prod["coeff"], json!(1));
    let x = prod["tubing"].to_string();
    let d = ok_json(&["dtub", "d", &x]);
    assert_eq!(d["degree"], json!(1));
    let e = ok_json(&["dtub", "decompose", &x]);
    assert!(e["expression"].as_str().unwrap().contains('×'));
    let v = ok_json(&["dtub", "vdash", p, p]);
    assert_eq!(v["result"].as_array().unwrap().len(), 1);
}

#[test]
fn opcat_fibers() {
    let src = tubing(Graph::linear(3), &[&[1], &[1, 2], &[1, 2, 3]]);
    let dst = tubing(Graph::linear(3), &[&[1, 2], &[1, 2, 3]]);
    let v = ok_json(&["opcat", "fiber", &src, &dst]);
    assert_eq!(v["cardinality"].as_array().unwrap().len(), 3);
    assert_eq!(v["fibers"].as_array().unwrap().len(), 2);
    let one = ok_json(&["opcat", "fiber", &src, &dst, "--index", "1"]);
    assert_eq!(one["fibers"].as_array().unwrap().len(), 1);
    assert_eq!(tubings(&["opcat", "fiber", &dst, &src]).status.code(), Some(2));
    assert_eq!(tubings(&["opcat", "fiber", &src, &dst, "--index", "9"]).status.code(), Some(2));
}

#[test]
fn census_counts() {
    let v = ok_json(&["census", "--max-n", "3"]);
    let counts: Vec<i64> = v.as_array().unwrap().iter().map(|l| l["count"].as_i64().unwrap()).collect();
    assert_eq!(counts, vec![1, 1, 4]);
    assert_eq!(tubings(&["census", "--max-n", "7"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let v = ok_json(&["verify", "d2", "--max-n", "4"]);
    assert_eq!(v["pass"], json!(true));
    assert_eq!(v["seed"], json!(1));
    let out = tubings(&["verify", "d2", "--max-n", "3", "--convention", "literal"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], json!(false));
    assert_eq!(tubings(&["verify", "d2", "--max-n", "7"]).status.code(), Some(2));
    assert_eq!(tubings(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_2_with_position() {
    let out = tubings(&["boundary", r#"{"graph":{"n":2,"edges":[[1,2]]},"tubes":[[1],[1,2]"#]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1 column"), "{err}");
    let out = tubings(&["boundary", r#"{"graph":{"n":2,"edges":[[1,2]]},"tubes":[[1],[2],[1,2]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = tubings(&["fvector", "K11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capped at 10"));
    assert_eq!(tubings(&["convert", "K3", "--to", "polymake"]).status.code(), Some(2));
    assert_eq!(tubings(&["fvector", "/no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["verify", "substitution", "--max-n", "3", "--samples", "200", "--seed", "42"];
    let a = tubings(&args);
    let b = tubings(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], json!(42));
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);

    let t = ok_json(&["enumerate", "L3"]);
    let first = &t["tubings"][3];
    let tub = json!({"graph": t["graph"], "tubes": first});
    let parsed: Tubing = serde_json::from_value(tub.clone()).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), tub);
}

#[test]
fn pretty_and_compact_agree() {
    let a = ok_json(&["fvector", "Cy5", "--pretty"]);
    let b = ok_json(&["--json", "fvector", "Cy5"]);
    assert_eq!(a, b);
}

#[test]
fn cache_dir_is_used_and_self_heals() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let fresh = ok_json(&["enumerate", "Cy4"]);
    assert_eq!(ok_json(&["enumerate", "Cy4", "--cache-dir", d]), fresh);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();
    std::fs::write(&path, "{\"key\":\"junk\"}").unwrap();
    assert_eq!(ok_json(&["enumerate", "Cy4", "--cache-dir", d]), fresh);

    let out = Command::new(env!("CARGO_BIN_EXE_tubings"))
        .args(["fvector", "K4"])
        .env("TUBINGS_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

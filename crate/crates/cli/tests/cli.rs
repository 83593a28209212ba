use std::process::Command;

use braid_regions::{Arity, PlaneTree};

fn bin(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_braid-regions"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn boxed_tree() -> String {
    PlaneTree::from_slots(
        Arity::Uniform(5),
        6,
        &[(4, &[0, 5]), (5, &[6, 2, 0, 1]), (2, &[3])],
    )
    .unwrap()
    .encode()
}

fn write_spec(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("braid-regions-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const EXAMPLE_SPEC: &str = r#"{"n":6,"hyperplanes":[{"i":1,"j":4,"s":[1,2,3,4,5]},{"i":4,"j":5,"s":[0]},{"i":2,"j":3,"s":[0]}]}"#;

#[test]
fn count_braid_four() {
    let (out, _, code) = bin(&[
        "count",
        "--preset",
        "braid",
        "--n",
        "4",
        "--methods",
        "fast,oracle",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("count.fast=24\n") && out.contains("count.oracle=24\n"));
    assert!(out.contains("trees.total=24\n"));
}

#[test]
fn count_json() {
    let (out, _, code) = bin(&[
        "count",
        "--preset",
        "ish",
        "--n",
        "3",
        "--methods",
        "fast,formula",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["counts"]["fast"], "16");
    assert_eq!(v["counts"]["formula"], "16");
    assert_eq!(v["agreement"], true);
    assert_eq!(v["trees"]["classes"]["(0,0,0,0)"], 16);
}

#[test]
fn spec_file_and_nest() {
    let path = write_spec(
        "small.json",
        r#"{"n":4,"hyperplanes":[{"i":1,"j":3,"s":[-2,1]},{"i":2,"j":4,"s":[0]},{"i":3,"j":4,"s":[-1,0,2]}]}"#,
    );
    let (out, err, code) = bin(&[
        "count",
        "--spec",
        path.to_str().unwrap(),
        "--methods",
        "brute,fast,oracle",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("agreement=true"));
    let (out, _, code) = bin(&[
        "count",
        "--preset",
        "nested-ish",
        "--n",
        "4",
        "--nest",
        "0,0..1,-1..2",
        "--methods",
        "formula,bijection,oracle",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("count.formula=80\n"), "{out}");
    assert!(out.contains("count.bijection=80\n") && out.contains("count.oracle=80\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        bin(&[
            "count",
            "--preset",
            "shi",
            "--n",
            "3",
            "--methods",
            "formula"
        ])
        .2,
        2
    );
    assert_eq!(
        bin(&[
            "count",
            "--preset",
            "ish",
            "--n",
            "6",
            "--methods",
            "brute",
            "--guard",
            "100"
        ])
        .2,
        3
    );
    assert_eq!(bin(&["count", "--preset", "nope", "--n", "3"]).2, 2);
    let path = write_spec(
        "bad.json",
        r#"{"n":2,"hyperplanes":[{"i":2,"j":1,"s":[0]}]}"#,
    );
    assert_eq!(bin(&["count", "--spec", path.to_str().unwrap()]).2, 2);
    assert_eq!(bin(&["--help"]).2, 0);
}

#[test]
fn verify_is_reproducible() {
    let args = [
        "verify",
        "--n",
        "3",
        "--m",
        "2",
        "--samples",
        "50",
        "--seed",
        "7",
    ];
    let (a, _, code) = bin(&args);
    assert_eq!(code, 0);
    assert_eq!(
        a.lines().filter(|l| l.contains("agreement=true")).count(),
        51
    );
    assert_eq!(bin(&args).0, a);
    let (j, _, _) = bin(&["verify", "--n", "2", "--m", "1", "--samples", "3", "--json"]);
    for line in j.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn render_boxes() {
    let path = write_spec("example.json", EXAMPLE_SPEC);
    let tree = boxed_tree();
    let (dot, err, code) = bin(&[
        "render",
        "--spec",
        path.to_str().unwrap(),
        "--tree",
        &tree,
        "--what",
        "boxes",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(dot.starts_with("digraph tree {"));
    assert!(dot.contains("label=\"{4,5}\""));
    assert!(dot.contains("label=\"{5,1}\""));
    assert!(dot.contains("5 [fillcolor=\"#8dd3c7\", peripheries=2]"));
    assert_eq!(dot.matches("subgraph").count(), 2);
    let (dot, _, _) = bin(&[
        "render",
        "--spec",
        path.to_str().unwrap(),
        "--tree",
        &tree,
        "--what",
        "connected",
    ]);
    assert!(dot.contains("label=\"{4,5,1}\""));
}

#[test]
fn explain_example() {
    let path = write_spec("example.json", EXAMPLE_SPEC);
    let (out, _, code) = bin(&[
        "explain",
        "--spec",
        path.to_str().unwrap(),
        "--tree",
        &boxed_tree(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("maximal_s_cadet={4,5} {5,1}\n"), "{out}");
    assert!(out.contains(".chain=0,1,2\n"));
    assert!(out.ends_with("contribution=-1\n"));
}

#[test]
fn involve_round_trip() {
    let left = "6(*,4(5(*,*,*,*,*,*),3(*,*,2(*,*,*,*,*,*),1(*,*,*,*,*,*),*,*),*,*,*,*),*,*,*,*)";
    let (right, err, code) = bin(&[
        "involve", "--preset", "ish", "--n", "6", "--tree", left, "--op", "phi_l",
    ]);
    assert_eq!(code, 0, "{err}");
    let (back, _, _) = bin(&[
        "involve",
        "--preset",
        "ish",
        "--n",
        "6",
        "--tree",
        right.trim(),
        "--op",
        "psi_l",
        "--index",
        "1",
    ]);
    assert_eq!(back.trim(), left);
    let (class, _, _) = bin(&["classify", "--preset", "ish", "--n", "6", "--tree", left]);
    assert_eq!(class, "(1,2,0,0)\n");
}

#[test]
fn bench_table() {
    let (out, _, code) = bin(&[
        "bench",
        "--preset",
        "ish",
        "--n",
        "2",
        "--methods",
        "brute,fast",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "method\tcount\truns\tmedian_ms\tmin_ms\tmax_ms");
    assert!(lines[1].starts_with("brute\t3\t3\t"));
    assert!(lines[2].starts_with("fast\t3\t3\t"));
    let (json, _, _) = bin(&["bench", "--preset", "ish", "--n", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

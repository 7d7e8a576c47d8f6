use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn dbr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbr"))
        .args(args)
        .env_remove("GHOST_MAX_ORDER")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn marks_of_s3() {
    let v = json_of(&dbr(&["marks", "--group", "S3", "--json"]));
    assert_eq!(
        v["marks"],
        json!([
            ["6/1", "0/1", "0/1", "0/1"],
            ["3/1", "1/1", "0/1", "0/1"],
            ["2/1", "0/1", "2/1", "0/1"],
            ["1/1", "1/1", "1/1", "1/1"]
        ])
    );
    let text = String::from_utf8(dbr(&["marks", "--group", "S3"]).stdout).unwrap();
    assert!(text.contains("[\"3/1\",\"1/1\",\"0/1\",\"0/1\"]"));
}

#[test]
fn alpha_determinant() {
    for (g, index) in [("C6", "36/1"), ("S3", "12/1"), ("D8", "1024/1")] {
        let v = json_of(&dbr(&["alpha", "--group", g, "--json"]));
        let det = v["determinant"].as_str().unwrap().trim_start_matches('-');
        assert_eq!(det, index, "{g}");
    }
}

#[test]
fn verifications_pass() {
    for args in [
        &["verify-diagram", "--group", "S3"][..],
        &["verify-diagram", "--group", "C2xC2", "--jobs", "1"],
        &["verify-cocycle", "--group", "C6"],
        &["verify-cocycle", "--group", "S3", "--samples", "500"],
        &["condense", "--group", "S3", "--right", "C4"],
        &["cyclic-decompose", "--family", "4,6", "--verify"],
    ] {
        let out = dbr(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let v = json_of(&dbr(&["verify-diagram", "--group", "S3", "--json"]));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["failed"] == 0));
}

#[test]
fn cyclic_decompose_is_deterministic() {
    let a = dbr(&["cyclic-decompose", "--family", "12"]);
    let b = dbr(&["cyclic-decompose", "--family", "12", "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["family"], json!([12]));
    let ks: Vec<u64> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["k"].as_u64().unwrap())
        .collect();
    assert_eq!(ks, [1, 2, 3, 4, 6, 12]);
    let total: u64 = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            c["n"].as_u64().unwrap().pow(2) * c["units_mod_k"].as_array().unwrap().len() as u64
        })
        .sum();
    assert_eq!(total, 90);
    // keys are sorted in the raw output
    let raw = String::from_utf8(a.stdout).unwrap();
    assert!(raw.starts_with("{\"components\":"));
}

#[test]
fn products_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, v: Value| {
        let p = dir.path().join(name);
        std::fs::File::create(&p)
            .unwrap()
            .write_all(v.to_string().as_bytes())
            .unwrap();
        p.to_string_lossy().into_owned()
    };
    // the diagonal of C2 x C2 is the identity of B(C2, C2)
    let diag = write(
        "d.json",
        json!({"kind": "biset", "left": "C2", "right": "C2", "terms": [{"subgroup": [0, 3], "coeff": "1"}]}),
    );
    let full = write(
        "f.json",
        json!({"kind": "biset", "left": "C2", "right": "C2", "terms": [{"subgroup": [0, 1, 2, 3], "coeff": "2/3"}]}),
    );
    let v = json_of(&dbr(&["mackey-mul", &diag, &full]));
    assert_eq!(
        v["terms"],
        json!([{"coeff": "2/3", "subgroup": [0, 1, 2, 3]}])
    );
    let g = write(
        "g.json",
        json!({"kind": "ghost", "left": "C2", "right": "C2", "terms": [{"subgroup": [0, 3], "coeff": "2"}]}),
    );
    let v = json_of(&dbr(&["ghost-mul", &g, &g, "--kappa"]));
    assert_eq!(v["terms"], json!([{"coeff": "2/1", "subgroup": [0, 3]}]));
    let out = dbr(&["ghost-mul", &g, &diag]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cayley_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("Z3.txt");
    std::fs::write(&good, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let v = json_of(&dbr(&[
        "group",
        "--cayley-file",
        good.to_str().unwrap(),
        "--json",
    ]));
    assert_eq!(
        (
            v["name"].as_str(),
            v["order"].as_u64(),
            v["subgroups"].as_u64()
        ),
        (Some("Z3"), Some(3), Some(2))
    );
    // identity at element 2
    let shifted = dir.path().join("W3.txt");
    std::fs::write(&shifted, "3\n1 2 0\n2 0 1\n0 1 2\n").unwrap();
    let path = shifted.to_str().unwrap();
    for verb in ["verify-diagram", "verify-cocycle", "condense"] {
        assert!(
            dbr(&[verb, "--cayley-file", path]).status.success(),
            "{verb}"
        );
    }
    let bad = dir.path().join("bad.txt");
    std::fs::write(
        &bad,
        "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n",
    )
    .unwrap();
    let out = dbr(&["group", "--cayley-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("associative"));
}

#[test]
fn parse_errors_exit_two() {
    let out = dbr(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(dbr(&["marks", "--group", "Q8"]).status.code(), Some(2));
    assert_eq!(dbr(&["marks"]).status.code(), Some(2));
    assert_eq!(dbr(&["cyclic-decompose"]).status.code(), Some(2));
    assert_eq!(
        dbr(&["cyclic-decompose", "--family", "4,x"]).status.code(),
        Some(2)
    );
}

#[test]
fn order_bound() {
    let out = Command::new(env!("CARGO_BIN_EXE_dbr"))
        .args(["subgroups", "--group", "C4xC4"])
        .env("GHOST_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_dbr"))
        .args(["group", "--group", "C4xC4", "--max-order", "16", "--json"])
        .env("GHOST_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["subgroups"], 15);
}

#[test]
fn accept_runs_every_criterion() {
    let v = json_of(&dbr(&["accept", "--json"]));
    let rows = v["criteria"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| r["passed"] == true), "{v}");
    let text = String::from_utf8(dbr(&["accept"]).stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" PASS: ")).count(), 13);
}

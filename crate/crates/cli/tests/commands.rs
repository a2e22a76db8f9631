use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_braidfold"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `{"terms": [{"word": w, "coeff": 1}]}` for each word.
fn words(ws: &[&[usize]]) -> Value {
    let one = json!({"num": [[0, 1]], "den": [[0, 1]]});
    json!({ "terms": ws.iter().map(|w| json!({"word": w, "coeff": one})).collect::<Vec<_>>() })
}

#[test]
fn fold_a3_swap() {
    let dir = TempDir::new().unwrap();
    let q = write(
        &dir,
        "q.json",
        &json!({"vertices": 3, "arrows": [[0, 1], [2, 1]], "vperm": [2, 1, 0]}),
    );
    let out = run(&["fold", "--quiver", s(&q)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["datum"], json!({"A": [[2, -1], [-2, 2]], "eps": [2, 1]}));
    assert_eq!(v["orbits"], json!([[0, 2], [1]]));
}

#[test]
fn fold_d4_triality() {
    let dir = TempDir::new().unwrap();
    let q = write(
        &dir,
        "q.json",
        &json!({"vertices": 4, "arrows": [[0, 1], [2, 1], [3, 1]], "vperm": [2, 1, 3, 0]}),
    );
    let v = stdout_json(&run(&["fold", "--quiver", s(&q)]));
    assert_eq!(v["datum"], json!({"A": [[2, -1], [-3, 2]], "eps": [3, 1]}));
}

#[test]
fn inadmissible_automorphism_exits_2() {
    let dir = TempDir::new().unwrap();
    let q = write(
        &dir,
        "q.json",
        &json!({"vertices": 2, "arrows": [[0, 1]], "vperm": [1, 0]}),
    );
    let out = run(&["fold", "--quiver", s(&q)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "NotAdmissible");
}

#[test]
fn unfold_then_fold() {
    let dir = TempDir::new().unwrap();
    let out = run(&["unfold", "--datum", "G2"]);
    assert_eq!(out.status.code(), Some(0));
    let q = write(&dir, "q.json", &stdout_json(&out));
    let v = stdout_json(&run(&["fold", "--quiver", s(&q)]));
    assert_eq!(v["datum"], json!({"A": [[2, -1], [-3, 2]], "eps": [3, 1]}));
}

#[test]
fn dims_a2() {
    let v = stdout_json(&run(&["dims", "--datum", "A2", "--height", "4"]));
    let rank_of = |w: [i64; 2]| {
        v.as_array()
            .unwrap()
            .iter()
            .find(|r| r["weight"] == json!(w))
            .map(|r| r["rank"].as_u64().unwrap())
            .unwrap()
    };
    assert_eq!(rank_of([2, 1]), 2);
    assert_eq!(rank_of([2, 2]), 3);
    assert_eq!(rank_of([0, 0]), 1);
    let v = stdout_json(&run(&["dims", "--datum", "A2", "--height", "0"]));
    assert_eq!(
        v,
        json!([{"weight": [0, 0], "words": 1, "rank": 1, "pivots": [[]]}])
    );
}

#[test]
fn dims_over_the_bound_exits_3() {
    let out = run(&["dims", "--datum", "A2", "--height", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["error"], "ResourceLimit");
    let out = run(&[
        "dims",
        "--datum",
        "A2",
        "--height",
        "9",
        "--max-height",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn corrupted_datum_exits_2() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        &json!({"A": [[2, 1], [-1, 2]], "eps": [1, 1]}),
    );
    let out = run(&["verify", "--datum", s(&d)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "NotGCM");
}

#[test]
fn both_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", &json!({"vertices": 1, "arrows": []}));
    let out = run(&["dims", "--datum", "A2", "--quiver", s(&q)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pair_crossed_words() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &words(&[&[0, 1]]));
    let y = write(&dir, "y.json", &words(&[&[1, 0]]));
    let v = stdout_json(&run(&[
        "pair",
        "--datum",
        "A2",
        "--left",
        s(&x),
        "--right",
        s(&y),
    ]));
    // v^-1 / (1 - v^-2)^2 = v^3 / (v^4 - 2 v^2 + 1)
    assert_eq!(
        v["value"],
        json!({"num": [[3, 1]], "den": [[0, 1], [2, -2], [4, 1]]})
    );
}

#[test]
fn project_and_apply_ti() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &words(&[&[1]]));
    let out = run(&["ti", "--datum", "A2", "--i", "0", "--element", s(&x)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["image"]["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["certificate"]["products"], json!([[[1, 0]]]));
    let image = write(&dir, "image.json", &v["image"]);
    let back = stdout_json(&run(&[
        "ti",
        "--datum",
        "A2",
        "--i",
        "0",
        "--inverse",
        "--element",
        s(&image),
    ]));
    assert_eq!(back["image"], words(&[&[1]]));

    let y = write(&dir, "y.json", &words(&[&[0, 1]]));
    let p = stdout_json(&run(&[
        "project",
        "--datum",
        "A2",
        "--indices",
        "0",
        "--side",
        "right",
        "--element",
        s(&y),
    ]));
    assert_eq!(p["terms"].as_array().unwrap().len(), 2);
    let out = run(&[
        "project",
        "--datum",
        "A2",
        "--indices",
        "0,1",
        "--side",
        "right",
        "--element",
        s(&y),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ti_outside_subalgebra_exits_2() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &words(&[&[0, 1]]));
    let out = run(&["ti", "--datum", "A2", "--i", "0", "--element", s(&x)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "NotInSubalgebra");
}

#[test]
fn ksquare_on_folded_b2() {
    let dir = TempDir::new().unwrap();
    let q = write(
        &dir,
        "q.json",
        &json!({"vertices": 3, "arrows": [[0, 1], [2, 1]], "vperm": [2, 1, 0]}),
    );
    // orbit 1 is a sink
    let out = run(&["ksquare", "--quiver", s(&q), "--orbit", "1", "--orbit", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["reflected"], false);
    for m in ["0", "1", "2"] {
        assert_eq!(v["squares"][m]["equal"], true);
    }
    // orbit 0 is a source and gets reflected first
    let v = stdout_json(&run(&[
        "ksquare",
        "--quiver",
        s(&q),
        "--orbit",
        "0",
        "--orbit",
        "1",
    ]));
    assert_eq!(v["reflected"], true);
    assert_eq!(v["squares"]["1"]["equal"], true);
}

#[test]
fn ksquare_needs_a_sink_or_source() {
    let dir = TempDir::new().unwrap();
    let q = write(
        &dir,
        "q.json",
        &json!({"vertices": 3, "arrows": [[0, 1], [1, 2]]}),
    );
    let out = run(&["ksquare", "--quiver", s(&q), "--orbit", "1", "--orbit", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "NotSinkOrSource");
}

#[test]
fn verify_suites_pass_and_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "verify",
            "--datum",
            "B2",
            "--suite",
            "all",
            "--output",
            s(path),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
        // timings go to standard error only
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["pass"], true);

    let v = stdout_json(&run(&["verify", "--datum", "A2", "--suite", "serre"]));
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    let out = run(&["verify", "--datum", "A2", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_ksquare_on_quiver() {
    let dir = TempDir::new().unwrap();
    let q = write(
        &dir,
        "q.json",
        &json!({"vertices": 3, "arrows": [[0, 1], [2, 1]], "vperm": [2, 1, 0]}),
    );
    let v = stdout_json(&run(&["verify", "--quiver", s(&q), "--suite", "ksquare"]));
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"square(1,0;2)"));
}

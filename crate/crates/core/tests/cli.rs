use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tenfac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tenfac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tenfac(args);
    assert!(
        out.status.success(),
        "`{}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    tenfac(args).status.code().unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const X: &str = r#"{"d":2,"N":2,"field":"rational","levels":[["2"],["1","0"],["0","0","0","0"]]}"#;
const Y: &str = r#"{"d":2,"N":2,"field":"rational","levels":[["3"],["0","1"],["0","0","0","0"]]}"#;

#[test]
fn dimension_formula() {
    assert_eq!(stdout(&["dim", "2", "2"]), "7\n");
    assert_eq!(stdout(&["dim", "3", "0"]), "1\n");
    assert_eq!(stdout(&["dim", "1", "4"]), "5\n");
}

#[test]
fn rank_from_file() {
    let b = scratch(
        "b.json",
        r#"{"shape":[2,2],"field":"rational","coeffs":["1","0","1","1"]}"#,
    );
    let b = b.to_str().unwrap();
    assert_eq!(stdout(&["rank", b, "--method", "rref"]), "2\n");
    assert_eq!(stdout(&["rank", b, "--method", "svd"]), "2\n");
    let real = r#"{"shape":[2,3],"field":"real","coeffs":[0.5,1,1.5,1,2,3]}"#;
    assert_eq!(stdout(&["rank", real]), "1\n");
}

#[test]
fn algebra_product_matches_hand_computation() {
    let v: Value = serde_json::from_str(&stdout(&["algebra", "mul", X, Y])).unwrap();
    let want: Value = serde_json::from_str(
        r#"{"d":2,"N":2,"field":"rational","levels":[["6"],["3","2"],["0","1","0","0"]]}"#,
    )
    .unwrap();
    assert_eq!(v, want);
}

#[test]
fn algebra_outputs_feed_back_in() {
    let product = stdout(&["algebra", "mul", X, Y]);
    let inverse = stdout(&["algebra", "inv", product.trim()]);
    let one = stdout(&["algebra", "mul", product.trim(), inverse.trim()]);
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(
        v["levels"],
        serde_json::json!([["1"], ["0", "0"], ["0", "0", "0", "0"]])
    );

    let projected = stdout(&["algebra", "project", product.trim(), "--level", "1"]);
    let v: Value = serde_json::from_str(&projected).unwrap();
    assert_eq!(v["N"], 1);
    assert_eq!(v["levels"], serde_json::json!([["6"], ["3", "2"]]));
}

#[test]
fn signatures_feed_the_algebra() {
    let csv = scratch("path.csv", "0,0\n1,0\n1,1\n");
    let csv = csv.to_str().unwrap();
    let whole = stdout(&["sig", csv, "--depth", "2"]);
    let left = stdout(&["sig", csv, "--depth", "2", "--to", "0.5"]);
    let right = stdout(&["sig", csv, "--depth", "2", "--from", "0.5"]);
    let joined = stdout(&["algebra", "mul", left.trim(), right.trim()]);
    let (a, b): (Value, Value) = (
        serde_json::from_str(&whole).unwrap(),
        serde_json::from_str(&joined).unwrap(),
    );
    assert_eq!(a["levels"], b["levels"]);
    assert_eq!(a["levels"][2], serde_json::json!([0.5, 1.0, 0.0, 0.5]));
    assert_eq!(a["interval"], serde_json::json!([0.0, 1.0]));

    let oracle = stdout(&["sig", csv, "--depth", "2", "--oracle", "1000"]);
    let o: Value = serde_json::from_str(&oracle).unwrap();
    assert!((o["levels"][2][1].as_f64().unwrap() - 1.0).abs() < 1e-2);
}

#[test]
fn factor_outputs() {
    assert_eq!(
        stdout(&["factor", "a1@b1 + a1@b2 + a2@b1 + a2@b2"]),
        "(a1 + a2)@(b1 + b2)\nterms: 1\n"
    );
    assert_eq!(
        stdout(&[
            "factor",
            "a1@b1 + a2@b2 + a1@b3 + a2@b3",
            "--method",
            "greedy-right"
        ]),
        "a1@(b1 + b3) + a2@(b2 + b3)\nterms: 2\n"
    );
    let out = stdout(&[
        "factor",
        "3 a1@b1 + 4 a1@b2 + 6 a2@b1 + 8 a2@b2",
        "--field",
        "real",
    ]);
    assert!(out.ends_with("terms: 1\n"), "{out}");
    let out = stdout(&[
        "factor",
        "u1@v1@w1 + u1@v2@w2 - u2@v1@w2 + u2@v2@w1",
        "--method",
        "als",
        "--max-rank",
        "2",
    ]);
    assert!(out.contains("status: failed"), "{out}");
    let out = stdout(&[
        "factor",
        "u1@v1@w1 + u1@v2@w2 - u2@v1@w2 + u2@v2@w1",
        "--method",
        "als",
        "--field",
        "complex",
        "--json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "verified-upper-bound");
    assert_eq!(v["term_count"], 2);
    assert_eq!(v["field"], "complex");
}

#[test]
fn expression_json_round_trips() {
    let src = "-x@y + 2 x^2@y + 3 x@y^2 - 4 x^2@y^2 + x^3@y^2";
    let factored = stdout(&["factor", src, "--json"]);
    let expanded = stdout(&["expand", factored.trim()]);
    assert_eq!(expanded, "-x@y + 3 x@y^2 + 2 x^2@y - 4 x^2@y^2 + x^3@y^2\n");
    let json = stdout(&["expand", src, "--json"]);
    assert_eq!(stdout(&["factor", json.trim()]), stdout(&["factor", src]));
    let file = scratch("e.txt", src);
    assert_eq!(stdout(&["expand", file.to_str().unwrap()]), expanded);
}

#[test]
fn decompose_prints_display_then_json() {
    let m =
        r#"{"shape":[3,3],"field":"rational","coeffs":["3","4","2","1","2","1","0","-2","-1"]}"#;
    let out = stdout(&["decompose", m]);
    let (shown, json) = out.split_once("\n\n").unwrap();
    assert_eq!(
        shown,
        "⎡3  4  2⎤   ⎡3⎤   ⎡1⎤   ⎡ 4⎤   ⎡  0⎤\n\
         ⎢1  2  1⎥ = ⎢1⎥ ⊗ ⎢0⎥ + ⎢ 2⎥ ⊗ ⎢  1⎥\n\
         ⎣0 -2 -1⎦   ⎣0⎦   ⎣0⎦   ⎣-2⎦   ⎣1/2⎦"
    );
    let v: Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(stdout(&["decompose", m, "--json"]), json);
}

#[test]
fn user_errors_exit_one() {
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["rank", "/no/such/file.json"]), 1);
    assert_eq!(code(&["rank", "{not json"]), 1);
    assert_eq!(
        code(&[
            "rank",
            r#"{"shape":[1,1],"field":"complex","coeffs":[[1,0]]}"#
        ]),
        1
    );
    assert_eq!(code(&["factor", "a1@b1 + a1"]), 1);
    assert_eq!(code(&["factor", "a@b@c"]), 1);
    assert_eq!(code(&["factor", "a@b", "--field", "complex"]), 1);
    assert_eq!(code(&["sig", "/no/such.csv", "--depth", "2"]), 1);
    let real = r#"{"d":2,"N":2,"field":"real","levels":[[1.0],[0,0],[0,0,0,0]]}"#;
    assert_eq!(code(&["algebra", "mul", X, real]), 1);
    let deeper = r#"{"d":2,"N":1,"field":"rational","levels":[["1"],["0","0"]]}"#;
    assert_eq!(code(&["algebra", "mul", X, deeper]), 1);
    assert_eq!(code(&["algebra", "project", X, "--level", "3"]), 1);

    let zero = r#"{"d":2,"N":1,"field":"rational","levels":[["0"],["1","0"]]}"#;
    let out = tenfac(&["algebra", "inv", zero]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("level-0 scalar is zero"));
}

#[test]
fn numerical_failure_exits_two() {
    let huge = r#"{"shape":[2,2],"field":"real","coeffs":[1e308,1e308,1e308,1e308]}"#;
    assert_eq!(code(&["decompose", huge, "--method", "svd"]), 2);
}

#[test]
fn help_and_version() {
    let out = stdout(&["--version"]);
    assert!(out.starts_with("tenfac "));
    for sub in [
        "rank",
        "decompose",
        "factor",
        "expand",
        "sig",
        "algebra",
        "dim",
    ] {
        assert!(stdout(&[sub, "--help"]).contains("Usage"), "{sub}");
    }
}

use std::process::{Command, Output};

use serde_json::Value;

fn chaoslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn converge_reports_exact_gaps() {
    let out = chaoslab(&["converge", "--r", "2,2", "--n", "4,8,16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "converge");
    assert_eq!(v["verdict"], "PASS");
    let gaps: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["gap"]["exact"].as_str().unwrap())
        .collect();
    assert_eq!(gaps, ["1/4", "1/8", "1/16"]);
    assert_eq!(v["rows"][0]["limit"]["decimal"], 1.0);
}

#[test]
fn classical_times_and_decimals() {
    let out = chaoslab(&[
        "converge",
        "--model",
        "classical",
        "--r",
        "1,1",
        "--t",
        "1,2",
        "--n",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"][0]["gap"]["exact"], "0");
    let half = chaoslab(&[
        "converge",
        "--model",
        "classical",
        "--r",
        "2",
        "--t",
        "0.5",
        "--n",
        "4",
    ]);
    assert_eq!(json(&half)["params"]["t"], "1/2");
}

#[test]
fn reports_are_byte_identical() {
    let a = chaoslab(&["residual", "--r", "2", "--n", "4,6,8"]);
    let b = chaoslab(&["residual", "--r", "2", "--n", "4,6,8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn csv_and_out_file() {
    let out = chaoslab(&["count", "--r", "2,2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "instance,nc2,nc2_star,pi2,pi2_star,limit,gap,error"
    );
    assert_eq!(text.lines().nth(1).unwrap(), "\"(2,2)\",1,1,2,2,,,");

    let dir = std::env::temp_dir().join(format!("chaoslab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("paths.json");
    let out = chaoslab(&[
        "paths",
        "--r",
        "2,2,2",
        "--irreducible",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"][0]["instance"], "(0,2,2,0)");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_and_guard_errors_exit_3() {
    assert_eq!(
        chaoslab(&["crossval", "--max-total", "5"]).status.code(),
        Some(3)
    );
    assert_eq!(chaoslab(&["count", "--r", "2,x"]).status.code(), Some(3));
    assert_eq!(chaoslab(&["converge"]).status.code(), Some(3));
    let guarded = chaoslab(&["converge", "--r", "2,2", "--n", "4,500", "--guard", "1000"]);
    assert_eq!(guarded.status.code(), Some(3));
    assert!(json(&guarded)["rows"][1]["error"].is_string());
}

#[test]
fn small_commands() {
    let t = json(&chaoslab(&["tableaux", "--r", "1,1,1,1"]));
    assert_eq!(t["rows"].as_array().unwrap().len(), 2);
    let z = json(&chaoslab(&["toeplitz", "--r", "2", "--d", "3"]));
    assert_eq!(
        z["rows"][0]["values"]["matrix"][2],
        serde_json::json!(["1", "0", "1"])
    );
    let l = chaoslab(&["linearize", "--r", "1,1", "--family", "chebyshev"]);
    assert_eq!(l.status.code(), Some(0));
    assert_eq!(json(&l)["rows"][2]["values"]["chebyshev"], 1);
    let x = chaoslab(&["crossval", "--max-total", "4"]);
    assert_eq!(x.status.code(), Some(0));
    let f = chaoslab(&[
        "freeness", "--t", "1,2", "--r", "1,1", "--word", "ABABAB", "--n", "2,4,8",
    ]);
    assert_eq!(f.status.code(), Some(0));
}

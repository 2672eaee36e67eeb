use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spin-exchange"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.to_string().parse().unwrap()
}

#[test]
fn exchange_phase_example() {
    let (code, out, _) = run(&[
        "exchange-phase",
        "--basis",
        "canonical",
        "--two-s-a",
        "1",
        "--two-s-b",
        "1",
        "--pa",
        "1,0,0",
        "--pb",
        "0,1,0",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["command"], "exchange-phase");
    assert!((f(&v["results"]["phase"][0]) + 1.0).abs() < 1e-12);
    assert!(f(&v["results"]["phase"][1]).abs() < 1e-12);
    for key in ["inputs", "results", "tolerances"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn even_s_example() {
    let (code, out, _) = run(&["even-s", "--two-s", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["results"], serde_json::json!({"0": "allowed", "1": "forbidden"}));
}

#[test]
fn count_states_example() {
    let (code, out, _) = run(&["count-states", "--entities", "2", "--states", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["results"].to_string(), "3");
}

#[test]
fn every_subcommand_runs() {
    let cases: [&[&str]; 9] = [
        &["wigner-d", "--two-s", "3", "--alpha", "0.3", "--beta", "1.1", "--gamma", "-0.4"],
        &["cg", "--two-j1", "2", "--two-j2", "1"],
        &["frames", "--pa", "1,0,0", "--pb", "0,1,0", "--kind", "bisecting"],
        &[
            "exchange-phase",
            "--basis",
            "helicity",
            "--two-s-a",
            "3",
            "--two-s-b",
            "2",
            "--pa",
            "0,0,1",
            "--pb",
            "1,1,0",
        ],
        &["pauli", "--two-s", "1"],
        &["even-s", "--two-s", "4"],
        &[
            "jw-check",
            "--two-s-a",
            "2",
            "--two-s-b",
            "1",
            "--two-lambda-a",
            "2",
            "--two-lambda-b",
            "-1",
            "--two-j",
            "3",
        ],
        &["ls-table", "--two-s", "1", "--j-max", "2"],
        &["count-states", "--entities", "3", "--states", "4"],
    ];
    for args in cases {
        for format in ["json", "tsv"] {
            let mut full = vec!["--format", format];
            full.extend_from_slice(args);
            let (code, out, err) = run(&full);
            assert_eq!(code, 0, "{full:?}: {err}");
            assert!(!out.is_empty());
            if format == "json" {
                json(&out);
            }
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["even-s"]).0, 2);
    let (code, _, err) = run(&["frames", "--pa", "1,0,0", "--pb", "0,0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("--pb"));
    // collinear without a seed
    assert_eq!(run(&["frames", "--pa", "1,0,0", "--pb", "1,0,0"]).0, 2);
    assert_eq!(run(&["frames", "--pa", "1,0,0", "--pb", "1,0,0", "--seed", "0,1,0"]).0, 0);
    let (code, _, err) = run(&[
        "jw-check",
        "--two-s-a",
        "1",
        "--two-s-b",
        "1",
        "--two-lambda-a",
        "1",
        "--two-lambda-b",
        "1",
        "--two-j",
        "2",
        "--n-theta",
        "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("too coarse"));
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("spin-exchange-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (code, out, _) = run(&["cg", "--two-j1", "3", "--two-j2", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["--format", "tsv", "ls-table", "--two-s", "2", "--j-max", "2"];
    assert_eq!(run(&args).1, run(&args).1);
}

use std::fs;
use std::process::{Command, Output};

use serde_json::json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltl2dpa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const PERSISTENCE: &str = "\
HOA: v1
States: 4
Start: 0
AP: 2 \"a\" \"b\"
alphabet: one-hot
acc-name: Buchi
Acceptance: 1 Inf(0)
ldba-qd: 1 2 3
--BODY--
State: 0 \"1\"
[0&!1] 0
[!0&1] 0
[0&!1] 1
[!0&1] 2
State: 1 \"2\"
[0&!1] 1 {0}
[!0&1] 3
State: 2 \"3\"
[!0&1] 2 {0}
[0&!1] 3
State: 3 \"4\"
[0&!1] 3
[!0&1] 3
--END--
";

#[test]
fn translates_to_hoa() {
    let o = run(&["translate", "-f", "F G a | F G b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("HOA: v1"));
    assert!(text.contains("acc-name: parity min even"));
}

#[test]
fn output_is_reproducible() {
    let args = ["translate", "-f", "G F a -> G F b", "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn writes_json_and_dot() {
    let json: serde_json::Value =
        serde_json::from_slice(&run(&["translate", "-f", "G F a", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["stats"]["dpa_states"], json!(3));
    assert!(json["hoa"].as_str().unwrap().contains("--BODY--"));
    assert!(stdout(&run(&["translate", "-f", "G F a", "--format", "dot"])).starts_with("digraph"));
    assert!(stdout(&run(&["translate", "-f", "G F a", "--ldba"])).contains("acc-name: Buchi"));
}

#[test]
fn reads_hoa_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("persistence.hoa");
    let output = dir.path().join("out.hoa");
    fs::write(&input, PERSISTENCE).unwrap();
    let o = run(&[
        "translate",
        "--input-hoa",
        input.to_str().unwrap(),
        "--no-reduce",
        "--no-compress",
        "-o",
        output.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&output).unwrap().contains("States: 5"));

    let o = run(&[
        "check",
        "--input-hoa",
        input.to_str().unwrap(),
        "--max-prefix",
        "4",
        "--max-period",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report["counterexample"].is_null());
}

#[test]
fn check_of_a_formula_passes() {
    let o = run(&["check", "-f", "F G a | F G b", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["translate"]).status.code(), Some(1));
    assert_eq!(run(&["translate", "-f", "a", "--format", "pdf"]).status.code(), Some(1));
    assert_eq!(run(&["translate", "-f", "a U"]).status.code(), Some(2));
    assert_eq!(
        run(&["translate", "-f", "G F a & G F b", "--budget", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["translate", "--input-hoa", "/nonexistent.hoa"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn rand_ldba_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.hoa");
    let o = run(&["rand-ldba", "--seed", "4", "--states", "6", "--density", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    fs::write(&path, &o.stdout).unwrap();
    let o = run(&["check", "--input-hoa", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(run(&["rand-ldba", "--states", "1"]).status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let o = run(&[
        "bench",
        "--family",
        "r",
        "--n-min",
        "1",
        "--n-max",
        "2",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,n,states,colors,max_t,base_m,millis");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("r,1,"));
    assert_eq!(run(&["bench", "--family", "zz"]).status.code(), Some(1));
}

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindswap")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_plan(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_two_machine_base_case() {
    let out = run(&["solve", "--target", "(1 2)", "--m", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let text = &text[text.find("\"moves\"").unwrap()..];
    let moves = ["[\"a1\",\"x1\"]", "[\"a2\",\"x2\"]", "[\"a1\",\"x2\"]", "[\"a2\",\"x1\"]", "[\"x1\",\"x2\"]"];
    let positions: Vec<usize> = moves.iter().map(|m| text.find(m).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    assert!(text.contains("\"step_count\":5"));
}

#[test]
fn solve_optimal3_and_empty() {
    let out = run(&["solve", "--target", "(1 2 3)", "--m", "3", "--solver", "optimal3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"step_count\":2,\"lower_bound\":2"));

    let out = run(&["solve", "--target", ""]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"moves\": []"));
}

#[test]
fn solve_error_codes() {
    assert_eq!(code(&run(&["solve", "--target", "(1 2"])), 2);
    assert_eq!(code(&run(&["solve", "--target", "(1 2)", "--m", "3"])), 3);
    assert_eq!(code(&run(&["solve", "--target", "(1 2)", "--m", "3", "--solver", "optimal3"])), 3);
    assert_eq!(code(&run(&["solve", "--target", "(1 2)", "--m", "3", "--solver", "keeler2"])), 2);
}

#[test]
fn every_solver_output_verifies_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["--target", "(1 2)(3 4 5)", "--m", "2"],
        &["--target", "(1 2 3)(4 5)(6 7)", "--m", "3", "--solver", "optimal3"],
        &["--target", "(1 2 3 4)(5 6)", "--m", "5"],
        &["--target", "(1 2 3 4)", "--m", "4"],
        &["--target", "(1 6 2)(3 5)", "--m", "6"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut full = vec!["solve"];
        full.extend_from_slice(args);
        let out = run(&full);
        assert_eq!(code(&out), 0, "{args:?}");
        let path = write_plan(&dir, &format!("plan{i}.json"), &stdout(&out));
        let check = run(&["verify", "--plan", &path]);
        assert_eq!(code(&check), 0, "{args:?}");
        assert!(stdout(&check).contains("clean"));
    }
}

#[test]
fn verify_reports_duplicate_supports() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
  "schema_version": 1,
  "machine_size": 2,
  "target": "()",
  "outsiders": ["x1"],
  "moves": [
    ["a1","x1"],
    ["x1","a1"]
  ],
  "metadata": {"solver":"hand","step_count":2,"lower_bound":null}
}
"#;
    let path = write_plan(&dir, "dup.json", text);
    let out = run(&["verify", "--plan", &path, "--json"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["product_ok"], true);
    assert_eq!(report["rule_violations"][0]["kind"], "duplicate_support");
    assert_eq!(report["rule_violations"][0]["move_index"], 1);
}

#[test]
fn verify_f_plan_against_explicit_target() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"schema_version":1,"machine_size":3,"target":"()","outsiders":["x1"],
        "moves":[["a2","a1","x1"],["a3","a2","x1"]],
        "metadata":{"solver":"hand","step_count":2,"lower_bound":null}}"#;
    let path = write_plan(&dir, "f.json", text);
    assert_eq!(code(&run(&["verify", "--plan", &path, "--target", "(1 2 3)"])), 0);
    assert_eq!(code(&run(&["verify", "--plan", &path])), 1);
}

#[test]
fn verify_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_plan(&dir, "bad.json", "{\"schema_version\": 1");
    assert_eq!(code(&run(&["verify", "--plan", &path])), 2);
    assert_eq!(code(&run(&["verify", "--plan", "/nonexistent/plan.json"])), 2);
}

#[test]
fn oracle_lengths_and_codes() {
    let out = run(&["oracle", "--target", "(1 2)(3 4)", "--m", "3", "--d", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("minimal length: 3\n"));

    let out = run(&["oracle", "--target", "(1 2)", "--m", "2", "--d", "2"]);
    assert!(stdout(&out).starts_with("minimal length: 5\n"));

    let out = run(&["oracle", "--target", "", "--m", "3", "--d", "1"]);
    assert!(stdout(&out).starts_with("minimal length: 0\n"));

    let out = run(&["oracle", "--target", "(1 2)", "--m", "3", "--d", "1"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("none within bound"));

    let out = run(&["oracle", "--target", "(1 2 3 4 5)(6 7)(8 9)", "--m", "3", "--d", "2", "--budget", "100"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn oracle_is_deterministic() {
    let args = ["oracle", "--target", "(1 2 3)(4 5)(6 7)", "--m", "3", "--d", "1"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn infinite_demos() {
    let out = run(&["infinite", "finitary2", "--sigma", "(a1 a2)(a3 a4 a5)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("product: (⋯ a7 a6 a5 z a1)(a1 a2 z a5 a4 a3 a6 a7 ⋯)"));
    assert!(text.contains("Step 1: Forgetful\n    a1 → a2\n    a2 → z\n    z → a5\n"));
    assert!(text.contains("Step 2: Retentive\n    z → a1\n    a5 → z\n    a6 → a5\n"));

    let out = run(&["infinite", "shift3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Step 1: Retentive\n    a2 → a1\n    z → a2\n    a3 → z\n"));

    let out = run(&["infinite", "star", "--k", "2", "--horizon", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("product: (⋯ a5 a4 a3 z a1)(a1 a2 z a3 a4 ⋯)"));

    assert_eq!(code(&run(&["infinite", "finitary2", "--sigma", "(1 x1)"])), 2);
}

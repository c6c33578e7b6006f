//! End-to-end coverage of the command-line interface: exit codes, report
//! shapes, and byte-level determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treespace"))
}

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn indices_match_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t1.json");
    write(
        &tree,
        r#"{"roots":[{"groups":[{"template":{},"multiplicity":"omega"}]}]}"#,
    );
    let (code, out, _) = run(&["indices", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "indices");
    assert_eq!(v["results"]["o"], "2");
    assert_eq!(v["results"]["beta"], "w");
    assert_eq!(v["results"]["cb_rank"], "2");
    assert_eq!(v["results"]["cb_count"], "1");
}

#[test]
fn cantor_then_indices_gives_omega() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("c1.json");
    let (code, _, _) = run(&["cantor", "--depth", "1", "--out", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let (code, out, _) = run(&["indices", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["beta"], "w");
}

#[test]
fn zero_epsilon_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.json");
    write(&tree, r#"{"roots":[{}]}"#);
    let (code, _, err) = run(&["fragment", tree.to_str().unwrap(), "--epsilon", "0/1"]);
    assert_eq!(code, Some(2));
    assert!(err.contains("positive"), "{err}");
}

#[test]
fn malformed_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("bad.json");
    write(&tree, r#"{"roots":"#);
    let (code, _, _) = run(&["indices", tree.to_str().unwrap()]);
    assert_eq!(code, Some(2));

    let missing = dir.path().join("missing.json");
    let (code, _, _) = run(&["indices", missing.to_str().unwrap()]);
    assert_eq!(code, Some(2));

    let empty = dir.path().join("empty.json");
    write(&empty, r#"{"roots":[]}"#);
    let (code, _, _) = run(&["indices", empty.to_str().unwrap()]);
    assert_eq!(code, Some(2));
}

#[test]
fn fragment_reports_the_decaying_trace() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t2.json");
    write(
        &tree,
        r#"{"roots":[{"weight":"1","groups":[{"template":{"weight":"1","groups":[{"template":{"weight":"1/4"},"multiplicity":"omega"}]},"multiplicity":"omega"}]}]}"#,
    );
    let (code, out, _) = run(&[
        "fragment",
        tree.to_str().unwrap(),
        "--epsilon",
        "1/8",
        "--full-sequence",
    ]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["index"], "3");
    let seq = v["results"]["sequence"].as_array().unwrap();
    assert_eq!(seq.len(), 4);
    assert_eq!(seq[1]["marked"], serde_json::json!(["0", "0/0"]));
    assert_eq!(seq[2]["marked"], serde_json::json!(["0"]));

    let (_, out2, _) = run(&[
        "fragment",
        tree.to_str().unwrap(),
        "--epsilon",
        "1/2",
    ]);
    let v2: serde_json::Value = serde_json::from_str(&out2).unwrap();
    assert_eq!(v2["results"]["index"], "2");
}

#[test]
fn zippin_with_function_reports_error_and_lipschitz() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t1.json");
    write(
        &tree,
        r#"{"roots":[{"groups":[{"template":{},"multiplicity":"omega"}]}]}"#,
    );
    let f = dir.path().join("g.json");
    write(
        &f,
        r#"{"value":"0","groups":[{"explicit":[{"value":"1"},{"value":"1"},{"value":"1"}]}]}"#,
    );
    let dot = dir.path().join("n.dot");
    let (code, out, _) = run(&[
        "zippin",
        tree.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--function",
        f.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0), "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["error"], "0");
    assert_eq!(v["results"]["lipschitz"], "1");
    assert!(v["checks"].as_array().unwrap().len() >= 10);
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.contains("a=1"));
}

#[test]
fn reports_and_dot_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("gen.json");
    let tree2 = dir.path().join("gen2.json");
    let (code, out_a, _) = run(&["gen", "--seed", "9", "--out", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let (_, out_b, _) = run(&["gen", "--seed", "9", "--out", tree2.to_str().unwrap()]);
    assert_eq!(out_a.replace("gen.json", ""), out_b.replace("gen2.json", ""));
    assert_eq!(
        std::fs::read_to_string(&tree).unwrap(),
        std::fs::read_to_string(&tree2).unwrap()
    );

    let (_, z1, _) = run(&["zippin", tree.to_str().unwrap(), "--epsilon", "1/4"]);
    let (_, z2, _) = run(&["zippin", tree.to_str().unwrap(), "--epsilon", "1/4"]);
    assert_eq!(z1, z2);

    let (_, c1, _) = run(&["check", tree.to_str().unwrap(), "--epsilon", "1/4"]);
    let (_, c2, _) = run(&["check", tree.to_str().unwrap(), "--epsilon", "1/4"]);
    assert_eq!(c1, c2);
}

#[test]
fn check_passes_on_generated_trees() {
    let dir = tempfile::tempdir().unwrap();
    for seed in [1u64, 2, 3] {
        let tree = dir.path().join(format!("g{seed}.json"));
        let (code, _, _) = run(&["gen", "--seed", &seed.to_string(), "--out", tree.to_str().unwrap()]);
        assert_eq!(code, Some(0));
        let (code, out, _) = run(&[
            "check",
            tree.to_str().unwrap(),
            "--epsilon",
            "1/8",
            "--copy-bound",
            "2",
        ]);
        assert_eq!(code, Some(0), "seed {seed}: {out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["results"]["passed"], v["results"]["total"]);
    }
}

#[test]
fn text_format_prints_check_lines() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("c.json");
    run(&["cantor", "--depth", "1", "--out", tree.to_str().unwrap()]);
    let (code, out, _) = run(&[
        "check",
        tree.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--format",
        "text",
    ]);
    assert_eq!(code, Some(0));
    assert!(out.lines().any(|l| l.starts_with("[pass]")));
    assert!(!out.contains("[FAIL]"));
}

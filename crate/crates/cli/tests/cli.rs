use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evoalg::classify::verify::{Report, Status};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn example(name: &str) -> PathBuf {
    corpus().join("examples").join(name)
}

fn evoalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evoalg"))
        .args(args)
        .env_remove("EVOALG_CORPUS")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = evoalg(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

#[test]
fn analyze_two_maximal_ideals() {
    let (code, out, _) = run(&["analyze", path(&example("two-maximal-ideals.mat"))]);
    assert_eq!(code, 0);
    assert!(out.contains("maximal basic ideals: {1,2,3} {1,2,4} (dimension 3)"), "{out}");
    assert!(out.contains("irreducible: yes"));
    assert!(out.contains("simple: no"));
}

#[test]
fn analyze_json_keys() {
    let (code, out, _) = run(&["--json", "analyze", path(&example("identity4.mat"))]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["perfect"], true);
    assert_eq!(v["simple"], false);
    assert_eq!(v["irreducible"], "reducible");
    assert_eq!(v["dim"], 4);
    assert_eq!(v["field"], "Q");
    for key in ["basic_simple", "zero_count", "diag_zero_count", "degree_profile", "basic_ideals", "maximal_basic_ideals", "condition_323", "graph"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn analyze_two_cycle_is_simple() {
    let (code, out, _) = run(&["analyze", path(&example("two-cycle.mat"))]);
    assert_eq!(code, 0);
    assert!(out.contains("\nsimple: yes"), "{out}");
}

#[test]
fn analyze_pattern_and_seeded_instance() {
    let file = corpus().join("c3.1-t1/r01a.pat");
    let (code, out, _) = run(&["analyze", path(&file)]);
    assert_eq!(code, 0);
    assert!(out.contains("pattern level"));
    assert!(out.contains("generically perfect: yes"));
    let seeded = run(&["--seed", "11", "--field", "F10007", "analyze", path(&file)]);
    assert_eq!(seeded.0, 0);
    assert!(seeded.1.contains("over F10007 (matrix level)"));
    assert_eq!(seeded, run(&["--seed", "11", "--field", "F10007", "analyze", path(&file)]));
}

#[test]
fn input_and_capability_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mat");
    fs::write(&bad, "dim 2\n1 x y\n").unwrap();
    assert_eq!(run(&["analyze", path(&bad)]).0, 2);
    assert_eq!(run(&["analyze", path(&dir.path().join("missing.mat"))]).0, 2);
    let (code, _, err) = run(&["--field", "F9", "analyze", path(&example("identity4.mat"))]);
    assert_eq!(code, 3, "{err}");
    let header = dir.path().join("f4.mat");
    fs::write(&header, "dim 1 field F4\n1\n").unwrap();
    assert_eq!(run(&["analyze", path(&header)]).0, 3);
    assert_eq!(run(&["--field", "R", "analyze", path(&example("identity4.mat"))]).0, 2);
}

#[test]
fn iso_monomial_pair() {
    let (code, out, _) = run(&["iso", path(&example("monomial-pair-a.mat")), path(&example("monomial-pair-b.mat"))]);
    assert_eq!(code, 0);
    assert!(out.contains("sigma: (1,2,4,3)"), "{out}");
    assert!(out.contains("scales: (1, 1, 1, 1)"));
}

#[test]
fn iso_negative_and_identity() {
    let (code, out, _) = run(&["iso", path(&example("identity4.mat")), path(&example("monomial-pair-a.mat"))]);
    assert_eq!(code, 1);
    assert!(out.contains("zero-count mismatch"), "{out}");
    let (code, out, _) = run(&["--json", "iso", path(&example("block-diagonal.mat")), path(&example("block-diagonal.mat"))]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["sigma"], "id");
}

#[test]
fn iso_needs_perfect_input() {
    let dir = tempfile::tempdir().unwrap();
    let singular = dir.path().join("singular.mat");
    fs::write(&singular, "dim 2\n1 1\n1 1\n").unwrap();
    let (code, _, err) = run(&["iso", path(&singular), path(&singular)]);
    assert_eq!(code, 2);
    assert!(err.contains("not perfect"), "{err}");
}

#[test]
fn classify_stated_counts() {
    let (code, out, _) = run(&["classify", "4.1.2", "--expected"]);
    assert_eq!(code, 0);
    assert!(out.contains("families: 10"));
    let (code, out, _) = run(&["classify", "grid", "--expected"]);
    assert_eq!(code, 0);
    assert!(out.contains("starred cells: 93"));
    let (code, out, _) = run(&["classify", "5.1.1", "--expected"]);
    assert_eq!(code, 1, "22 fingerprint classes against a stated 24");
    assert!(out.contains("fingerprint classes: 22"));
    assert_eq!(run(&["classify", "5.1.1"]).0, 0);
}

#[test]
fn classify_against_tables() {
    let (code, out, _) = run(&["classify", "3.3", "--expected"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("match against the bundled tables"));
    let (code, out, _) = run(&["classify", "dim3-simple", "--expected"]);
    assert_eq!(code, 0);
    assert!(out.contains("no stated count"));
    assert_eq!(run(&["classify", "4.9.9"]).0, 2);
}

#[test]
fn classify_json() {
    let (code, out, _) = run(&["--json", "classify", "dim2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 5);
    assert_eq!(v["classification"]["kind"], "families");
}

#[test]
fn verify_shipped_corpus() {
    let (code, out, _) = run(&["verify-tables"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(" 0 FAIL"));
    assert!(out.contains("errata (allowlisted):"));
    let again = run(&["verify-tables"]);
    assert_eq!(again.1, out, "output is deterministic");
}

#[test]
fn verify_json_round_trip() {
    let (code, out, _) = run(&["--json", "verify-tables", path(&corpus())]);
    assert_eq!(code, 0);
    let report: Report = serde_json::from_str(&out).unwrap();
    assert!(report.is_clean());
    assert!(report.count(Status::Warn) > 0);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap().trim(), out.trim());
}

#[test]
fn injected_fault_fails_its_row() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("corpus");
    copy_dir(&corpus(), &copy);
    let file = copy.join("c3.1-t1/r01b.pat");
    let text = fs::read_to_string(&file).unwrap();
    let flipped = text.replacen("  1   1   0   0", "  1   1   1   0", 1);
    assert_ne!(text, flipped);
    fs::write(&file, flipped).unwrap();
    let (code, out, _) = run(&["verify-tables", path(&copy)]);
    assert_eq!(code, 1);
    assert!(out.contains("c3.1-t1/r01:pattern"), "{out}");

    let out = Command::new(env!("CARGO_BIN_EXE_evoalg"))
        .args(["--json", "verify-tables"])
        .env("EVOALG_CORPUS", &copy)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.item("c3.1-t1/r01:pattern").map(|i| i.status), Some(Status::Fail));
}

#[test]
fn verify_missing_corpus() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["verify-tables", path(dir.path())]).0, 2);
    let broken = dir.path().join("fig");
    fs::create_dir(&broken).unwrap();
    fs::write(broken.join("manifest"), "case = 3.1\nkind = list\ngroup = fix 1\nrows = 1\n").unwrap();
    assert_eq!(run(&["verify-tables", path(dir.path())]).0, 2);
}

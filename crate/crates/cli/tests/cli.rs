//! End-to-end tests of the `suffkit` binary: exit codes, report JSON, and
//! determinism across worker counts.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_suffkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("suffkit-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn check_passes_on_a_sufficientarian_rule() {
    let out = run(&[
        "check",
        "--space",
        "B2",
        "--agents",
        "2",
        "--rule",
        r#"{"type":"sufficientarian","S":["1"]}"#,
        "--axioms",
        "all",
    ]);
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("result: all hold"), "{stdout}");
}

#[test]
fn check_reports_separability_violation_with_exit_one() {
    let dir = tmpdir("check");
    let report = dir.join("report.json");
    let out = run(&[
        "--out",
        report.to_str().unwrap(),
        "check",
        "--space",
        "U5",
        "--agents",
        "2",
        "--rule",
        r#"{"type":"example2","tau":"1/2"}"#,
        "--axioms",
        "separability",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["command"], "check");
    assert_eq!(json["all_hold"], false);
    let verdict = &json["verdicts"][0];
    assert_eq!(verdict["axiom"], "separability");
    assert_eq!(verdict["holds"], false);
    assert!(verdict["witness"].is_object());
}

#[test]
fn unknown_fixture_is_a_usage_error() {
    let out = run(&[
        "check",
        "--space",
        "NOPE",
        "--agents",
        "2",
        "--rule",
        r#"{"type":"min"}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown fixture"));
}

#[test]
fn too_few_agents_is_a_usage_error() {
    let out = run(&[
        "check",
        "--space",
        "B2",
        "--agents",
        "1",
        "--rule",
        r#"{"type":"sufficientarian","S":["1"]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn derive_reports_threshold_and_example3() {
    let out = run(&[
        "derive",
        "--space",
        "G2",
        "--agents",
        "2",
        "--rule",
        r#"{"type":"sufficientarian","S":["(1,0)","(1,1)"]}"#,
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains(r#"threshold: yes (beta = "(1,0)")"#),
        "{stdout}"
    );

    let dir = tmpdir("derive");
    let report = dir.join("ex3.json");
    let out = run(&[
        "--out",
        report.to_str().unwrap(),
        "derive",
        "--space",
        "C3",
        "--agents",
        "3",
        "--rule",
        r#"{"type":"example3"}"#,
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let c = &json["classification"];
    assert_eq!(c["is_endogenous_leximin"], false);
    assert_eq!(c["is_sufficientarian"], false);
    assert_eq!(c["not_sufficientarian"]["reason"], "too_many_star_levels");
}

#[test]
fn derive_utilitarian_shows_three_star_levels() {
    let dir = tmpdir("derive-util");
    let report = dir.join("util.json");
    let out = run(&[
        "--out",
        report.to_str().unwrap(),
        "derive",
        "--space",
        "C3",
        "--agents",
        "2",
        "--rule",
        r#"{"type":"utilitarian","u":"values"}"#,
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let c = &json["classification"];
    assert_eq!(c["is_sufficientarian"], false);
    assert_eq!(c["not_sufficientarian"]["levels"], 3);
    assert_eq!(
        c["star_order"]["levels"],
        serde_json::json!([["2"], ["1"], ["0"]])
    );
}

#[test]
fn enumerate_counts_match_the_recurrence() {
    let out = run(&[
        "enumerate",
        "--space",
        "B2",
        "--agents",
        "3",
        "--mode",
        "quotient",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("75 weak orders over 4 items"));
}

#[test]
fn search_finds_matches_and_flags_empty_results() {
    let dir = tmpdir("search");
    let report = dir.join("search.json");
    let out = run(&[
        "--out",
        report.to_str().unwrap(),
        "search",
        "--space",
        "B2",
        "--agents",
        "2",
        "--satisfy",
        "wo,sym,sep,sj",
        "--mode",
        "direct",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["count"], 3);
    assert_eq!(json["scanned"], 75);
    assert!(json["first"]["levels"].is_array());

    // Contradictory signature: exact zero count, exit 1.
    let out = run(&[
        "search",
        "--space",
        "B2",
        "--agents",
        "2",
        "--satisfy",
        "wo",
        "--violate",
        "wo",
        "--mode",
        "direct",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reproduce_targets_exit_zero_and_reject_unknown_names() {
    let out = run(&["reproduce", "independence"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("reproduce independence: ok"));

    let out = run(&["reproduce", "thm99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_and_search_reports_are_byte_identical_across_worker_counts() {
    let dir = tmpdir("determinism-check");
    let one = dir.join("check-w1.json");
    let max = dir.join("check-wmax.json");
    let args = |out: &std::path::Path, workers: &[&str]| {
        let mut v: Vec<String> = workers.iter().map(|s| s.to_string()).collect();
        v.extend(
            [
                "--out",
                out.to_str().unwrap(),
                "check",
                "--space",
                "U9",
                "--agents",
                "2",
                "--rule",
                r#"{"type":"example1","alpha":["1","2"]}"#,
                "--axioms",
                "all",
            ]
            .map(String::from),
        );
        v
    };
    // Exit code 1 both times: the rule fails separability among others.
    assert_eq!(
        bin().args(args(&one, &["--workers", "1"])).output().unwrap().status.code(),
        Some(1)
    );
    assert_eq!(bin().args(args(&max, &[])).output().unwrap().status.code(), Some(1));
    assert_eq!(fs::read(&one).unwrap(), fs::read(&max).unwrap());
}

#[test]
fn reproduce_reports_are_byte_identical_across_worker_counts() {
    let dir = tmpdir("determinism");
    for target in ["thm1", "thm2", "prop4", "mariotti"] {
        let one = dir.join(format!("{target}-w1.json"));
        let max = dir.join(format!("{target}-wmax.json"));
        assert!(
            run(&[
                "--workers",
                "1",
                "--out",
                one.to_str().unwrap(),
                "reproduce",
                target
            ])
            .status
            .success()
        );
        assert!(
            run(&["--out", max.to_str().unwrap(), "reproduce", target])
                .status
                .success()
        );
        assert_eq!(
            fs::read(&one).unwrap(),
            fs::read(&max).unwrap(),
            "{target} differs across worker counts"
        );
    }
}

#[test]
fn space_rule_and_relation_files_load_from_disk() {
    let dir = tmpdir("files");
    let space_path = dir.join("tiny.json");
    fs::write(
        &space_path,
        r#"{"name":"tiny","kind":"semilattice","elements":["lo","hi"],"order":[["lo","hi"]],"values":{"lo":"0","hi":"1"}}"#,
    )
    .unwrap();
    let rule_path = dir.join("rule.json");
    fs::write(&rule_path, r#"{"type":"threshold","beta":"hi"}"#).unwrap();
    let out = run(&[
        "check",
        "--space",
        space_path.to_str().unwrap(),
        "--agents",
        "2",
        "--rule",
        rule_path.to_str().unwrap(),
        "--axioms",
        "all",
    ]);
    assert!(out.status.success(), "{out:?}");

    // An explicit relation loaded through a file reference.
    let rel_path = dir.join("rel.json");
    fs::write(
        &rel_path,
        r#"{"levels": [[["hi","hi"]], [["hi","lo"]], [["lo","lo"]]]}"#,
    )
    .unwrap();
    let rule = format!(r#"{{"type":"explicit","file":"{}"}}"#, rel_path.display());
    let out = run(&[
        "check",
        "--space",
        space_path.to_str().unwrap(),
        "--agents",
        "2",
        "--rule",
        &rule,
        "--axioms",
        "wo,sym,sep,sj",
    ]);
    assert!(out.status.success(), "{out:?}");

    // A broken relation file: one orbit missing.
    fs::write(&rel_path, r#"{"levels": [[["hi","hi"]], [["hi","lo"]]]}"#).unwrap();
    let out = run(&[
        "check",
        "--space",
        space_path.to_str().unwrap(),
        "--agents",
        "2",
        "--rule",
        &rule,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("incomplete table"));
}

#[test]
fn pt_detail_map_is_in_the_report() {
    let dir = tmpdir("pt");
    let report = dir.join("pt.json");
    let out = run(&[
        "--out",
        report.to_str().unwrap(),
        "check",
        "--space",
        "U5",
        "--agents",
        "2",
        "--rule",
        r#"{"type":"threshold","beta":"1/2"}"#,
        "--axioms",
        "pt",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let betas = json["verdicts"][0]["per_beta"].as_array().unwrap();
    assert_eq!(betas.len(), 3);
    assert!(
        betas
            .iter()
            .any(|b| b["beta"] == "1/2" && b["holds"] == true)
    );
}

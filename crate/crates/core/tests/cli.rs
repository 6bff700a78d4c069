use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majorize"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_accepts_a_valid_witness() {
    let out = run(&[
        "check",
        "--instance",
        &fixture("running_theorem.json"),
        "--certificate",
        &fixture("beta_valid.json"),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["kind"], "theorem");
}

#[test]
fn check_reports_the_failing_condition() {
    let out = run(&[
        "check",
        "--instance",
        &fixture("running_theorem.json"),
        "--certificate",
        &fixture("beta_invalid.json"),
    ]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    let failed: Vec<&str> = v["conclusion"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .map(|c| c["condition"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["column-majorization", "row-majorization"]);
}

#[test]
fn solve_lemma_finds_smallest_f() {
    let out = run(&["solve", "--instance", &fixture("running_lemma.json")]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["certificate"]["fs"], serde_json::json!([[1, 1]]));
}

#[test]
fn solve_theorem_both_routes_agree() {
    let via = stdout_json(&run(&[
        "solve",
        "--instance",
        &fixture("running_theorem.json"),
    ]));
    let direct = stdout_json(&run(&[
        "solve",
        "--instance",
        &fixture("running_theorem.json"),
        "--direct",
    ]));
    assert_eq!(via["outcome"], "found");
    assert_eq!(via["certificate"], direct["certificate"]);
    assert_eq!(
        via["certificate"]["beta"]["factors"][0]["exponents"],
        serde_json::json!([0, 2])
    );
}

#[test]
fn solved_certificate_checks() {
    let report = scratch("running_report.json");
    let out = run(&["solve", "--instance", &fixture("running_theorem.json")]);
    std::fs::write(&report, &out.stdout).unwrap();
    let out = run(&[
        "check",
        "--instance",
        &fixture("running_theorem.json"),
        "--certificate",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn premise_failure_is_a_verification_failure() {
    let out = run(&[
        "solve",
        "--instance",
        &fixture("weight_mismatch_lemma.json"),
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["outcome"], "none");
}

#[test]
fn zero_budget_aborts() {
    let out = run(&[
        "solve",
        "--instance",
        &fixture("running_lemma.json"),
        "--budget",
        "0",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout_json(&out)["outcome"], "aborted");
}

#[test]
fn malformed_input_names_the_part() {
    let out = run(&["check", "--instance", &fixture("increasing_part.json")]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("part 1 (2) is larger than the preceding part (1)"),
        "{err}"
    );
    assert_eq!(
        code(&run(&["solve", "--instance", "/nonexistent/instance.json"])),
        2
    );
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn translate_round_trips() {
    let lemma = scratch("translated_lemma.json");
    let out = run(&["translate", "--instance", &fixture("running_theorem.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        serde_json::from_str::<Value>(
            &std::fs::read_to_string(fixture("running_lemma.json")).unwrap()
        )
        .unwrap()
    );
    std::fs::write(&lemma, &out.stdout).unwrap();
    let back = stdout_json(&run(&["translate", "--instance", lemma.to_str().unwrap()]));
    assert_eq!(
        back["gamma"]["factors"][0]["exponents"],
        serde_json::json!([0, 1, 2])
    );
    assert_eq!(
        (back["n"].as_u64(), back["m"].as_u64(), back["p"].as_u64()),
        (Some(1), Some(1), Some(1))
    );
}

#[test]
fn identity_on_weighted_pair() {
    let out = run(&["identity", "--instance", &fixture("identity_pair.json")]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["sigma_degrees"], serde_json::json!([4]));
    assert_eq!(v["equal"], true);
}

#[test]
fn gen_is_deterministic_and_solvable() {
    let args = [
        "gen", "--seed", "11", "--k", "2", "--s", "3", "--count", "5",
    ];
    let one = run(&args);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, run(&args).stdout);
    for (i, line) in String::from_utf8(one.stdout).unwrap().lines().enumerate() {
        let path = scratch(&format!("gen_{i}.json"));
        std::fs::write(&path, line).unwrap();
        assert_eq!(
            code(&run(&[
                "solve",
                "--instance",
                path.to_str().unwrap(),
                "--workers",
                "2"
            ])),
            0
        );
    }
    let theorem = run(&["gen", "--seed", "11", "--mode", "theorem"]);
    let v: Value = serde_json::from_slice(&theorem.stdout).unwrap();
    assert!(v.get("alpha").is_some() && v.get("gamma").is_some());
}

#[test]
fn counterexample_reproduces() {
    let out = run(&["repro-counterexample"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["premise"], true);
    assert_eq!(v["report"]["outcome"], "none");
    let out = run(&["repro-counterexample", "--weight", "1"]);
    assert_eq!(stdout_json(&out)["premise"], false);
}

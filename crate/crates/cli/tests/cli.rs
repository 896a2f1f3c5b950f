use std::path::PathBuf;
use std::process::{Command, Output};

use pencil_cli::{to_json, InstanceFile};
use serde_json::Value;

fn pencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn generated(name: &str, args: &[&str]) -> String {
    let out = pencil(&[&["gen"], args].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    write(name, std::str::from_utf8(&out.stdout).unwrap())
}

fn kinds(v: &Value) -> Vec<String> {
    v["matrices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["kind"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn generation_is_byte_identical() {
    let args = ["gen", "feasible", "--m", "2", "--n", "4", "--seed", "7"];
    assert_eq!(pencil(&args).stdout, pencil(&args).stdout);
}

#[test]
fn instance_files_round_trip_byte_for_byte() {
    for (kind, m) in [("example34", 4), ("feasible", 3), ("strongly-indefinite", 3), ("single", 1)] {
        let out = pencil(&["gen", kind, "--m", "3", "--n", "6", "--seed", "3"]);
        let text = String::from_utf8(out.stdout).unwrap();
        let parsed = InstanceFile::parse(&text).unwrap();
        assert!(to_json(&parsed, 2) + "\n" == text, "{kind} is not byte-stable");
        let inst = parsed.to_instance().unwrap();
        assert_eq!(inst.b.len(), m);
        let again = InstanceFile::from_generated(
            &pencil_core::gen::Generated {
                a: inst.a.clone(),
                family: inst.family().unwrap(),
                lambda_star: None,
            },
            parsed.metadata.clone(),
        );
        assert!(to_json(&again, 2) + "\n" == text, "{kind} does not survive re-encoding");
    }
}

#[test]
fn example_file_starts_with_the_published_row() {
    let out = pencil(&["gen", "example34", "--json-indent", "0"]);
    let v = json(&out);
    let row: Vec<f64> = v["B"][0][0].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(row, vec![1.0, 0.0, 0.0, 0.0]);
    assert_eq!(v["metadata"]["witnesses"].as_array().unwrap().len(), 8);
}

#[test]
fn classify_reports_each_matrix() {
    let ex = generated("classify_ex.json", &["example34"]);
    let out = pencil(&["classify", &ex]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(kinds(&json(&out)), vec!["INDEFINITE"; 4]);

    let id = write("classify_id.json", r#"{"schema_version":"1","n":2,"A":[[1,0],[0,1]]}"#);
    assert_eq!(kinds(&json(&pencil(&["classify", &id]))), vec!["POSITIVE_DEFINITE"]);
    let zero = write("classify_zero.json", r#"{"schema_version":"1","n":2,"A":[[0,0],[0,0]]}"#);
    assert_eq!(kinds(&json(&pencil(&["classify", &zero]))), vec!["ZERO"]);
}

#[test]
fn certify_exit_codes_follow_the_verdict() {
    let ex = generated("certify_ex.json", &["example34"]);
    let weak = pencil(&["certify", &ex, "--class", "weak"]);
    assert_eq!(weak.status.code(), Some(0));
    assert_eq!(json(&weak)["report"]["verdict"], "CONFIRMED");

    let strong = pencil(&["certify", &ex, "--class", "strong"]);
    assert_eq!(strong.status.code(), Some(1));
    let v = json(&strong);
    assert_eq!(v["report"]["verdict"], "REFUTED");
    assert_eq!(v["report"]["witnesses"][0]["kind"], "phase_violation");

    let si = generated("certify_si.json", &["strongly-indefinite", "--m", "3", "--n", "6", "--seed", "1"]);
    let out = pencil(&["certify", &si, "--class", "strong"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["verdict"], "CONFIRMED");
}

#[test]
fn reports_carry_seed_and_budget() {
    let f = generated("seeded.json", &["feasible", "--m", "2", "--n", "4", "--seed", "2"]);
    let v = json(&pencil(&["solve", &f, "--seed", "5", "--budget-restarts", "32"]));
    assert_eq!(v["seed"], 5);
    assert_eq!(v["budget"]["restarts"], 32);
    assert_eq!(v["status"], "VERIFIED");
}

#[test]
fn interval_and_single_parameter_solve_agree() {
    let f = write(
        "single.json",
        r#"{"schema_version":"1","n":2,"A":[[1,0],[0,1]],"B":[[[1,0],[0,-1]]]}"#,
    );
    let iv = json(&pencil(&["interval", &f]));
    let lo = iv["interval"]["lo"].as_f64().unwrap();
    let hi = iv["interval"]["hi"].as_f64().unwrap();
    assert!((lo + 1.0).abs() < 1e-6 && (hi - 1.0).abs() < 1e-6);

    let out = pencil(&["solve", &f]);
    assert_eq!(out.status.code(), Some(0));
    let l = json(&out)["point"]["lambda"][0].as_f64().unwrap();
    assert!(lo <= l && l <= hi);

    let grid = json(&pencil(&["oracle", &f, "--box=-2,2", "--points", "41"]));
    let feasible: Vec<f64> = grid["feasible"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["lambda"][0].as_f64().unwrap())
        .collect();
    assert_eq!(feasible.len(), 21);
    assert!(feasible.iter().all(|&x| lo - 1e-9 <= x && x <= hi + 1e-9));
}

#[test]
fn negative_outcomes_exit_with_one() {
    let empty = write(
        "empty.json",
        r#"{"schema_version":"1","n":2,"A":[[-1,0],[0,-1]],"B":[[[1,0],[0,-1]]]}"#,
    );
    let out = pencil(&["interval", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["interval"]["empty"], true);

    let out = pencil(&["solve", &empty, "--budget-restarts", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "NOT_FEASIBLE");

    let refuted = write(
        "neutral.json",
        r#"{"schema_version":"1","n":3,"A":[[-1,0,0],[0,-1,0],[0,0,-1]],"B":[[[1,0,0],[0,-1,0],[0,0,0]]]}"#,
    );
    let out = pencil(&["certify", &refuted, "--class", "neutral"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["witnesses"][0]["kind"], "negative_neutral");
}

#[test]
fn input_errors_exit_with_two() {
    let bad = write("bad.json", "{not json");
    assert_eq!(pencil(&["classify", &bad]).status.code(), Some(2));
    let asym = write("asym.json", r#"{"schema_version":"1","n":2,"A":[[1,2],[3,4]]}"#);
    assert_eq!(pencil(&["classify", &asym]).status.code(), Some(2));
    let two = generated("two.json", &["indefinite-pair", "--n", "3"]);
    assert_eq!(pencil(&["interval", &two]).status.code(), Some(2));
    assert_eq!(pencil(&["certify", &two, "--class", "hm"]).status.code(), Some(2));
    assert_eq!(pencil(&["gen", "strongly-indefinite", "--m", "9", "--n", "3"]).status.code(), Some(2));
    assert_eq!(pencil(&["classify", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(pencil(&["frobnicate"]).status.code(), Some(2));
    let f = generated("order.json", &["feasible", "--m", "3", "--n", "5"]);
    assert_eq!(pencil(&["solve", &f, "--order", "0,0,1"]).status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_results() {
    let f = generated("threads.json", &["feasible", "--m", "3", "--n", "5", "--seed", "4"]);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_pencil"))
            .args(["solve", &f, "--order", "2,0,1"])
            .env("PENCIL_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

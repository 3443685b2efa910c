use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gclogic"))
        .current_dir(root())
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn prove_shipped_script() {
    let o = run(&["prove", "scripts/gc1-unit.json"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["accepted"], true);
    assert_eq!(v["conclusion"], "p -> H F p");
}

#[test]
fn prove_rejects_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let script = r#"{"system":"Int2GC","lines":[
        {"f":"p -> p","just":{"kind":"axiom","name":"A1"}}]}"#;
    std::fs::write(&path, script).unwrap();
    let o = run(&["prove", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["accepted"], false);
    assert_eq!(v["line"], 1);
    std::fs::write(&path, r#"{"system":"K","lines":[]}"#).unwrap();
    assert_eq!(code(&run(&["prove", path.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["prove", "no/such/file.json"])), 2);
}

#[test]
fn dvee_algebra_countermodel() {
    let o = run(&[
        "countermodel",
        "G(p|q) -> G p | F q",
        "--mode",
        "algebra",
        "--fs",
        "--max",
        "5",
    ]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert!(v["algebra"]["elements"].is_array());
    assert!(v["valuation"]["p"].is_string());
    // The witness replays through `valid`.
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("alg.json");
    std::fs::write(&alg, serde_json::to_string(&v["algebra"]).unwrap()).unwrap();
    assert_eq!(
        code(&run(&["check-algebra", alg.to_str().unwrap(), "--fs"])),
        0
    );
    assert_eq!(
        code(&run(&[
            "valid",
            "--algebra",
            alg.to_str().unwrap(),
            "G(p|q) -> G p | F q"
        ])),
        1
    );
    let mut args = vec!["eval", "--algebra", alg.to_str().unwrap(), "--val"];
    let p = format!("p={}", v["valuation"]["p"].as_str().unwrap());
    let q = format!("q={}", v["valuation"]["q"].as_str().unwrap());
    args.extend([p.as_str(), q.as_str(), "G(p|q) -> G p | F q"]);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_ne!(String::from_utf8_lossy(&o.stdout).trim(), "1");
}

#[test]
fn theorems_have_no_countermodel() {
    for f in [
        "p -> H F p",
        "F H p -> p",
        "G p & F q -> F(p & q)",
        "F(p | q) -> F p | F q",
        "H top",
    ] {
        let o = run(&[
            "countermodel",
            f,
            "--mode",
            "algebra",
            "--fs",
            "--max",
            "4",
            "--jobs",
            "2",
        ]);
        assert_eq!(code(&o), 0, "{f}");
        assert_eq!(stdout_json(&o)["countermodel"], Value::Null);
    }
    let o = run(&["countermodel", "G p -> p", "--mode", "kripke", "--max", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout_json(&o)["world"].is_string());
}

#[test]
fn rough_verify_and_ops() {
    let o = run(&["rough", "fixtures/rough_two_point.json", "--verify"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["laws"]["d1"], "pass");
    assert_eq!(v["laws"]["d2"], "pass");
    let fails = v["dvee"]["failures"].as_array().unwrap();
    assert!(fails
        .iter()
        .any(|f| f["point"] == "x" && f["ops"] == "G/F" && f["lhs"] == "1" && f["rhs"] == "c"));
    let o = run(&[
        "rough",
        "fixtures/rough_two_point.json",
        "--verify",
        "--power",
    ]);
    assert_eq!(stdout_json(&o)["power"]["elements"], 25);
    let o = run(&[
        "rough",
        "fixtures/rough_two_point.json",
        "--op",
        "diaF",
        "--set",
        "psi",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o), serde_json::json!({"x": "c", "y": "c"}));
    let o = run(&[
        "rough",
        "fixtures/rough_two_point.json",
        "--op",
        "boxG",
        "--set",
        "nope",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn eval_three_chain() {
    let o = run(&[
        "eval",
        "--algebra",
        "fixtures/three_chain.json",
        "--val",
        "p=1",
        "q=u",
        "G(p->q) -> (F p -> F q)",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "u");
    let o = run(&[
        "eval",
        "--algebra",
        "fixtures/diamond.json",
        "--val",
        "p=a",
        "~p",
    ]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "b");
    let o = run(&[
        "eval",
        "--algebra",
        "fixtures/diamond.json",
        "--val",
        "p=a",
        "F p",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn frames_and_canonical() {
    assert_eq!(
        code(&run(&["check-frame", "fixtures/frames/preference.json"])),
        0
    );
    let o = run(&["check-frame", "fixtures/frames/not_r1.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["violation"]["condition"], "R1");
    assert_eq!(
        code(&run(&[
            "valid",
            "--frame",
            "fixtures/frames/preference.json",
            "G p -> p"
        ])),
        0
    );
    let o = run(&[
        "canonical",
        "--algebra",
        "fixtures/three_chain.json",
        "--check-key-lemma",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["worlds"], serde_json::json!(["{1}", "{u,1}"]));
    let expected: Value = serde_json::from_str(
        &std::fs::read_to_string(root().join("fixtures/frames/canonical_chain.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(v, expected);
}

#[test]
fn parse_and_enumerate() {
    let o = run(&["parse", "p -> q -> r"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "p -> q -> r");
    assert_eq!(code(&run(&["parse", "p ->"])), 2);
    let o = run(&["enumerate", "--what", "heyting", "--max", "7"]);
    assert_eq!(
        stdout_json(&o)["counts"],
        serde_json::json!([1, 1, 1, 2, 3, 5, 8])
    );
    let o = run(&["enumerate", "--what", "h2gc", "--max", "3"]);
    assert_eq!(stdout_json(&o)["counts"], serde_json::json!([1, 4, 36]));
    let o = run(&["enumerate", "--what", "h2gcfs", "--max", "3", "--list"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 11);
    assert_eq!(
        code(&run(&[
            "enumerate",
            "--what",
            "frames",
            "--kind",
            "nope",
            "--max",
            "1"
        ])),
        2
    );
    assert_eq!(code(&run(&["bogus"])), 2);
}

#[test]
fn corpus_runs() {
    let o = run(&["corpus", "--run-all", "--jobs", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().last().unwrap().ends_with(", 0 rejected"));
    assert!(!text.contains("FAIL"));
}

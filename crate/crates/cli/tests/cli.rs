use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yoneda-lab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("yoneda-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn single_object_audit_on_triangular_reports_s1() {
    let o = run(&["single-object-audit", "corpus:upper_triangular_2", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("ε not epi for S1: consistent with A·V^I ≠ V"));
}

#[test]
fn genweight_verdicts_on_cubic() {
    let o = run(&["genweight", "corpus:truncated_poly_x2x1", "--probe", "regular"]);
    let doc = stdout_json(&o);
    let fams = &doc["data"]["families"];
    assert_eq!(fams["weights"]["probes"]["regular"]["verdict"], false);
    assert_eq!(fams["weights"]["probes"]["regular"]["sum_dim"], 2);
    assert_eq!(fams["generalized"]["probes"]["regular"]["verdict"], true);
    // Pointwise cokernels of unit-fixed functors leave the fixed points here,
    // so the cokernel closure check fails and nothing else does.
    assert_eq!(code(&o), 1);
    let failed: Vec<&str> = doc["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["family:generalized/unit-fixed-closed-under-cokernel"]);
}

#[test]
fn adjunction_fleet_example() {
    let o = run(&["adjunction-fleet", "--count", "100", "--max-dim", "8", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("100/100 dimension identities"));
    assert_eq!(stdout_json(&o)["data"]["passed"], 100);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        vec!["single-object-audit", "corpus:matrix_full_2", "--seed", "3"],
        vec!["triangle-fleet", "--count", "20", "--seed", "9", "--field", "fp:7"],
        vec!["unit", "corpus:split_idempotent", "--seed", "5", "--count", "5"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn export_round_trips_through_a_file() {
    let first = scratch("m2.json");
    let o = run(&["export", "corpus:matrix_full_2", "--out", first.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let second = scratch("m2-again.json");
    let o = run(&["export", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    let o = run(&["validate", first.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn exported(name: &str) -> Value {
    let o = run(&["export", name]);
    assert_eq!(code(&o), 0);
    stdout_json(&o)
}

fn write_json(name: &str, v: &Value) -> String {
    let p = scratch(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn broken_associativity_exits_2_naming_triples() {
    let mut v = exported("corpus:matrix_full_2");
    // E12 * E12 becomes E22.
    v["algebra"]["structure"][1][1][3] = Value::String("1".into());
    let path = write_json("broken.json", &v);
    let o = run(&["validate", &path]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("associativity") && err.contains("violating_triples"), "{err}");
}

#[test]
fn wrong_generator_length_exits_2() {
    let mut v = exported("corpus:upper_triangular_2");
    v["ideals"]["I"]["generators"] = serde_json::json!([["1", "0"]]);
    let path = write_json("short.json", &v);
    let o = run(&["counit", &path]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ideals.I.generators[0]"));
}

#[test]
fn module_law_violation_exits_2() {
    let mut v = exported("corpus:split_idempotent");
    // The unit must act by the identity.
    v["modules"]["regular"]["action"][0] = serde_json::json!([["0", "0"], ["0", "1"]]);
    let path = write_json("badmodule.json", &v);
    let o = run(&["validate", &path]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("modules.regular"));
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        vec!["frobnicate", "corpus:matrix_full_2"],
        vec!["validate", "corpus:matrix_full_2", "--bogus"],
        vec!["validate", "corpus:no_such_thing"],
        vec!["validate", "corpus:matrix_full_2", "--field", "fp:4"],
        vec!["counit", "corpus:matrix_full_2", "--probe", "missing"],
        vec!["validate", "/nonexistent/instance.json"],
        vec!["weight", "corpus:matrix_full_2"],
        vec!["counit"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn corpus_commands_pass_over_q_and_f3() {
    for inst in ["matrix_full_2", "upper_triangular_2", "split_idempotent", "dual_numbers", "group_algebra_cyclic_3"] {
        for field in ["q", "fp:3"] {
            for command in ["validate", "eigenring", "subcategory", "realize", "counit", "unit", "fix", "single-object-audit"] {
                let target = format!("corpus:{inst}");
                let o = run(&[command, &target, "--field", field, "--count", "3"]);
                assert_eq!(code(&o), 0, "{command} {inst} {field}: {}", String::from_utf8_lossy(&o.stderr));
                assert_eq!(stdout_json(&o)["schema"], "yoneda-lab/1");
            }
        }
    }
}

#[test]
fn weight_passes_on_split_idempotent_over_f2() {
    let o = run(&["weight", "corpus:split_idempotent", "--field", "fp:2", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

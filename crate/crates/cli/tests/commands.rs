use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn sandpile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sandpile")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write_temp(name: &str, value: &Value) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn solve(name: &str, instance: Value, extra: &[&str]) -> (i32, Value) {
    let path = write_temp(name, &instance);
    let mut args = vec!["solve", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = sandpile(&args);
    (out.status.code().unwrap(), stdout_json(&out))
}

#[test]
fn square_cycle_instance() {
    let (code, v) = solve(
        "c7.json",
        json!({
            "graph": {"family": "square_cycle", "params": 7},
            "c1": [-12, 3, 3, 0, 3, 3, 0],
            "c2": [-14, 3, 3, 3, 3, 1, 1],
            "generators": [[-10, 1, 1, 3, 2, 3, 0], [-13, 3, 1, 3, 3, 1, 2]]
        }),
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!((&v["x"], &v["modulus"], &v["verified"]), (&json!("20"), &json!("91"), &json!(true)));
    assert_eq!(v["method"], "pairing");
    assert_eq!(v["status"], "ok");
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn wheel_instance_with_generators_file() {
    let gens = write_temp("w7_gens.json", &json!([[1, 2, 2, 2, 2, 2, 1], [1, 1, 2, 2, 2, 2, 2]]));
    let (code, v) = solve(
        "w7.json",
        json!({"graph": {"family": "wheel", "params": 7}, "c1": [2, 2, 2, 0, 2, 2, 0], "c2": [2, 2, 2, 1, 2, 2, 1]}),
        &["--generators-file", gens.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    assert_eq!((&v["x"], &v["modulus"]), (&json!("15"), &json!("29")));
}

#[test]
fn generators_file_may_be_structure_output() {
    let out = sandpile(&["structure", "wheel", "7"]);
    let gens = write_temp("w7_structure.json", &stdout_json(&out));
    let (code, v) = solve(
        "w7_b.json",
        json!({"graph": {"family": "wheel", "params": 7}, "c1": [2, 2, 2, 0, 2, 2, 0], "c2": [2, 2, 2, 1, 2, 2, 1]}),
        &["--generators-file", gens.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    // Smith generators give x modulo 29 as well
    let x: u64 = v["x"].as_str().unwrap().parse().unwrap();
    assert_eq!(x % 29, 15);
}

#[test]
fn brute_force_method() {
    let (code, v) = solve(
        "w7_brute.json",
        json!({"graph": {"family": "wheel", "params": 7}, "c1": [2, 2, 2, 0, 2, 2, 0], "c2": [2, 2, 2, 1, 2, 2, 1]}),
        &["--method", "brute"],
    );
    assert_eq!(code, 0);
    assert_eq!((&v["x"], &v["method"]), (&json!("15"), &json!("brute_force")));
}

#[test]
fn banana_method_agrees_with_brute_force() {
    let instance = json!({
        "graph": {"family": "banana", "params": [3, 7, 10]},
        "c1": [2, -17, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1],
        "c2": [2, -17, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1]
    });
    let (code, banana) = solve("banana.json", instance.clone(), &["--method", "banana"]);
    assert_eq!(code, 0);
    assert_eq!((&banana["modulus"], &banana["verified"]), (&json!("121"), &json!(true)));
    let (_, brute) = solve("banana_brute.json", instance.clone(), &["--method", "brute"]);
    let (_, pairing) = solve("banana_pairing.json", instance, &[]);
    assert_eq!(banana["x"], brute["x"]);
    assert_eq!(banana["x"], pairing["x"]);
}

#[test]
fn banana_method_rejects_other_sinks() {
    let (code, v) = solve(
        "banana_sink.json",
        json!({"graph": {"family": "banana", "params": [2, 3, 5]}, "c1": [1, -1, 0, 0, 0, 0, 0, 0], "c2": [1, -1, 0, 0, 0, 0, 0, 0]}),
        &["--method", "banana", "--sink", "0"],
    );
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
}

#[test]
fn explicit_graph_and_sink_override() {
    // a 5-cycle with sink 2
    let edges = [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 4, 1], [0, 4, 1]];
    let (code, v) = solve(
        "cycle.json",
        json!({"graph": {"vertices": 5, "edges": edges}, "c1": [1, 1, 0, 0], "c2": [0, 1, 1, 1]}),
        &["--sink", "2"],
    );
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["modulus"], "5");
}

#[test]
fn independent_target_exits_2() {
    let (code, v) = solve(
        "w7_indep.json",
        json!({"graph": {"family": "wheel", "params": 7}, "c1": [1, 2, 2, 2, 2, 2, 1], "c2": [1, 1, 2, 2, 2, 2, 2]}),
        &[],
    );
    assert_eq!(code, 2);
    assert_eq!(v["status"], "inconsistent");
}

#[test]
fn schema_errors_exit_1() {
    let (code, v) = solve("bad.json", json!({"graph": {"family": "wheel", "params": 7}, "c1": [1]}), &[]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
    let (code, _) = solve(
        "short.json",
        json!({"graph": {"family": "wheel", "params": 7}, "c1": [1, 2], "c2": [1, 2]}),
        &[],
    );
    assert_eq!(code, 1);
    let out = sandpile(&["solve", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sandpile(&["solve"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn structure_outputs() {
    for (family, params, factors, order) in [
        ("wheel", "7", json!([29, 29]), "841"),
        ("square_cycle", "7", json!([13, 91]), "1183"),
        ("banana", "3,7,10", json!([121]), "121"),
    ] {
        let out = sandpile(&["structure", family, params]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert_eq!(v["factors"], factors);
        assert_eq!(v["order"], order);
        assert_eq!(v["tree_count"], order);
        assert_eq!(v["closed_form"]["holds"], true);
    }
    let out = sandpile(&["structure", "square_cycle", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_small_wheel() {
    let out = sandpile(&["bench", "wheel", "3", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rows"][0]["order"], "16");
    assert!(v["rows"][0]["median_ms"].is_f64());
    assert_eq!(v["seed"], 0);
}

#[test]
fn bench_is_deterministic() {
    let run = |jobs: &str| {
        let v = stdout_json(&sandpile(&["bench", "square_cycle", "5..9", "--trials", "3", "--seed", "42", "--jobs", jobs]));
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|r| r["trials"].as_array().unwrap().iter().map(|t| (t["x"].clone(), t["solved_x"].clone())))
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn verify_paper_reports_each_check() {
    let out = sandpile(&["verify-paper"]);
    let v = stdout_json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 40);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    // the expected banana pairings disagree with the exact pseudoinverse (see README)
    assert_eq!(failed, ["banana_3_7_10.pairing_c1", "banana_3_7_10.pairing_c2", "banana_3_7_10.solution"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL banana_3_7_10.pairing_c1: expected 95/121, actual 92/121"));
}

#[test]
fn verify_paper_fault_injection() {
    let out = sandpile(&["verify-paper", "--inject-fault"]);
    let v = stdout_json(&out);
    assert_eq!(v["fault_injected"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"square_cycle_7.pseudoinverse"));
    assert_eq!(out.status.code(), Some(2));
}

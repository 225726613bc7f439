//! End-to-end runs of the binary: schema, exit codes, replay and units.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylcov"))
        .args(args)
        .env_remove("WEYLCOV_SEED")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), json)
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort_unstable();
    k
}

fn without_runtime(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("runtime_ms");
    v
}

#[test]
fn report_schema_is_stable() {
    let (code, r) = report(&["dpi", "--samples", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        keys(&r),
        [
            "cases", "command", "error", "max_violation", "params", "pass", "runtime_ms", "seed", "tolerance", "unit",
            "version"
        ]
    );
    for case in r["cases"].as_array().unwrap() {
        assert_eq!(
            keys(case),
            ["counterexample", "digest", "index", "inputs", "margin", "outputs", "residual", "violation"]
        );
        assert_eq!(case["digest"].as_str().unwrap().len(), 16);
    }
}

#[test]
fn maximally_entangled_depolarizing_margin() {
    let (code, r) = report(&["bound", "t2", "--dim", "2", "--p", "0.5", "--samples", "1", "--state", "maxent"]);
    assert_eq!(code, 0);
    assert_eq!(r["pass"], true);
    let margin = r["cases"][0]["margin"].as_f64().unwrap();
    assert!((margin - 0.511208).abs() < 1e-6, "{margin}");
}

#[test]
fn composite_dimension_is_a_precondition_error() {
    let out = run(&["mub", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension must be prime"));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["pass"], false);
    assert_eq!(r["error"]["kind"], "non_prime");
}

#[test]
fn qubit_depolarizing_minimal_entropy() {
    let (code, r) =
        report(&["minent", "--channel", "depolarizing", "--dim", "2", "--p", "0.5", "--restarts", "100", "--seed", "1"]);
    assert_eq!(code, 0);
    let v = r["cases"][0]["outputs"]["value"].as_f64().unwrap();
    assert!((v - 0.562335).abs() < 1e-6, "{v}");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["mub", "--dim", "3", "--bogus"][..],
        &["frobnicate"],
        &["covariance", "--channel", "depolarizing", "--dim", "3", "--p", "0.1", "--group", "nope"],
        &["minent", "--channel", "depolarizing", "--p", "0.1"],
        &["additivity", "--a", "not json", "--b", "{}"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn replays_are_byte_identical_apart_from_runtime() {
    for args in [
        &["bound", "t3", "--p", "0.25", "--samples", "6", "--seed", "11"][..],
        &["bound", "t1", "--dim", "3", "--lambda", "0.5,0.3,0.2", "--basis", "1", "--samples", "4", "--mix", "2"],
        &["minent", "--channel", "two-pauli", "--p", "0.2", "--restarts", "12", "--seed", "5"],
        &["dpi", "--samples", "6", "--seed", "9"],
    ] {
        let (_, a) = report(args);
        let (_, b) = report(args);
        assert_eq!(without_runtime(a).to_string(), without_runtime(b).to_string(), "{args:?}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_weylcov"))
        .args(["dpi", "--samples", "2"])
        .env("WEYLCOV_SEED", "42")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["seed"], 42);
}

#[test]
fn bits_rescale_entropies_only() {
    let args = ["bound", "t2", "--dim", "2", "--p", "0.5", "--state", "maxent"];
    let (_, nats) = report(&args);
    let (_, bits) = report(&[&["--bits"][..], &args].concat());
    assert_eq!(bits["unit"], "bits");
    let ln2 = std::f64::consts::LN_2;
    for key in ["lhs", "rhs", "entropy_constant"] {
        let n = nats["cases"][0]["outputs"][key].as_f64().unwrap();
        let b = bits["cases"][0]["outputs"][key].as_f64().unwrap();
        assert!((b * ln2 - n).abs() < 1e-14, "{key}");
    }
    assert_eq!(nats["tolerance"], bits["tolerance"]);
}

#[test]
fn tolerance_override_can_fail_a_run() {
    let (code, r) = report(&["--tol", "1e-30", "weyl", "--dim", "3"]);
    assert_eq!(r["tolerance"].as_f64(), Some(1e-30));
    if r["max_violation"].as_f64().unwrap() > 1e-30 {
        assert_eq!(code, 1);
        assert_eq!(r["pass"], false);
    }
}

#[test]
fn printed_two_pauli_split_is_reported_not_failed() {
    let (code, r) = report(&["decompose", "two-pauli", "--p", "0.2"]);
    assert_eq!(code, 0);
    let printed = &r["cases"][1];
    assert!((printed["residual"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    assert_eq!(printed["outputs"]["reproduces_channel"], false);
}

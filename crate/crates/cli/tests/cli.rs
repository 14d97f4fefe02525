use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn atto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atto"))
        .args(args)
        .output()
        .expect("spawn atto")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

/// `matrix` as rows of `(re, im)`.
fn matrix(v: &Value) -> Vec<Vec<(f64, f64)>> {
    v["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|c| (c[0].as_f64().unwrap(), c[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

fn assert_matrix(v: &Value, expected: &[&[f64]]) {
    let m = matrix(v);
    assert_eq!(m.len(), expected.len(), "row count");
    for (row, want) in m.iter().zip(expected) {
        assert_eq!(row.len(), want.len(), "column count");
        for (&(re, im), &w) in row.iter().zip(*want) {
            assert!((re - w).abs() < 1e-12 && im.abs() < 1e-12, "{m:?}");
        }
    }
}

fn temp_file(name: &str, contents: &[u8]) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("atto-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const Z2: &str = r#"{"zeros":[[0,0],[0,0]]}"#;
const Z3: &str = r#"{"zeros":[[0,0],[0,0],[0,0]]}"#;
const ALPHA: &str = r#"{"zeros":[[0.3,0.1],[-0.2,0.5]]}"#;
const BETA: &str = r#"{"zeros":[[0.1,-0.4],[0.6,0],[0,0]],"const":[0,1]}"#;
const SYMBOL: &str = "2z^-1 - (1+i)*z^3 + 0.5 + 0.25i z";

fn member(tag: &str) -> PathBuf {
    let out = atto(&[
        "build", "--alpha", ALPHA, "--beta", BETA, "--symbol", SYMBOL,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    temp_file(&format!("member-{tag}.json"), &out.stdout)
}

fn perturbed(tag: &str) -> PathBuf {
    let mut op = json(&atto(&[
        "build", "--alpha", ALPHA, "--beta", BETA, "--symbol", SYMBOL,
    ]));
    let entry = &mut op["matrix"][1][0][0];
    *entry = Value::from(entry.as_f64().unwrap() + 0.5);
    temp_file(&format!("perturbed-{tag}.json"), op.to_string().as_bytes())
}

#[test]
fn build_multiplication_by_z_between_monomial_spaces() {
    let out = atto(&["build", "--alpha", Z2, "--beta", Z3, "--symbol", "z"]);
    assert_eq!(code(&out), 0);
    assert_matrix(&json(&out), &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
}

#[test]
fn shift_on_z_squared_is_a_jordan_block() {
    let out = atto(&["shift", "--alpha", Z2]);
    assert_eq!(code(&out), 0);
    assert_matrix(&json(&out), &[&[0.0, 0.0], &[1.0, 0.0]]);
}

#[test]
fn modified_shift_adds_rank_one_corner() {
    // k_0 = 1 and k~_0 = z for alpha = z^2: S + a (1 ⊗ z).
    let out = atto(&["shift", "--alpha", Z2, "--a", "-2"]);
    assert_eq!(code(&out), 0);
    assert_matrix(&json(&out), &[&[0.0, -2.0], &[1.0, 0.0]]);
}

#[test]
fn zero_symbol_gives_zero_matrix() {
    let out = atto(&["build", "--alpha", ALPHA, "--beta", BETA, "--symbol", "0"]);
    assert_eq!(code(&out), 0);
    assert_matrix(&json(&out), &[&[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]]);
}

#[test]
fn build_output_is_deterministic() {
    let args = [
        "build", "--alpha", ALPHA, "--beta", BETA, "--symbol", SYMBOL,
    ];
    assert_eq!(atto(&args).stdout, atto(&args).stdout);
}

#[test]
fn member_passes_every_variant() {
    let path = member("variants");
    let path = path.to_str().unwrap();
    for variant in ["t1", "c2", "c3a", "c3b", "si"] {
        let out = atto(&[
            "membership",
            path,
            "--variant",
            variant,
            "--a",
            "0.5-1i",
            "--b",
            "-1.5",
        ]);
        assert_eq!(code(&out), 0, "{variant}");
        let v = json(&out);
        assert_eq!(v["verdict"], Value::Bool(true));
        assert!(v["residual"].as_f64().unwrap() <= 1e-8, "{variant}: {v}");
    }
}

#[test]
fn perturbed_operator_fails_every_variant() {
    let path = perturbed("fails");
    let path = path.to_str().unwrap();
    for variant in ["t1", "c2", "c3a", "c3b", "si"] {
        let out = atto(&["membership", path, "--variant", variant]);
        assert_eq!(code(&out), 1, "{variant}");
        assert_eq!(json(&out)["verdict"], Value::Bool(false));
    }
}

#[test]
fn all_variants_report_eleven_agreeing_results() {
    let path = member("all");
    let out = atto(&[
        "membership",
        path.to_str().unwrap(),
        "--variant",
        "all",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["results"].as_array().unwrap().len(), 11);
    assert_eq!(v["agree"], Value::Bool(true));

    let out = atto(&[
        "membership",
        perturbed("all").to_str().unwrap(),
        "--variant",
        "all",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["agree"], Value::Bool(true));
}

#[test]
fn membership_accepts_operator_on_stdin() {
    use std::io::Write;
    use std::process::Stdio;

    let contents = std::fs::read(member("stdin")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_atto"))
        .args(["membership", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&contents).unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(0));
}

#[test]
fn membership_can_build_from_a_symbol() {
    let out = atto(&[
        "membership",
        "--alpha",
        ALPHA,
        "--beta",
        BETA,
        "--symbol",
        "z^-2 + 3",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn recovered_symbol_rebuilds_the_operator() {
    let path = member("rebuild");
    let original: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let out = atto(&["recover", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let pair = json(&out);
    assert_eq!(pair["psi"]["coords"].as_array().unwrap().len(), 3);
    assert_eq!(pair["chi"]["coords"].as_array().unwrap().len(), 2);

    let pair_file = temp_file("pair-recovered.json", &out.stdout);
    let rebuilt = json(&atto(&[
        "build",
        "--alpha",
        ALPHA,
        "--beta",
        BETA,
        "--symbol",
        pair_file.to_str().unwrap(),
    ]));
    for (r, o) in matrix(&rebuilt)
        .iter()
        .flatten()
        .zip(matrix(&original).iter().flatten())
    {
        assert!((r.0 - o.0).abs() < 1e-10 && (r.1 - o.1).abs() < 1e-10);
    }
}

#[test]
fn recover_rejects_non_members() {
    let out = atto(&["recover", perturbed("recover").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
}

#[test]
fn series_check_converges_for_members() {
    let out = atto(&["series-check", member("series").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["monotone"], Value::Bool(true));
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);

    let out = atto(&[
        "series-check",
        "--alpha",
        Z2,
        "--beta",
        Z3,
        "--symbol",
        "z^-1 + z",
        "--terms",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["residual"].as_f64().unwrap() <= 1e-12);

    let out = atto(&[
        "series-check",
        member("series").to_str().unwrap(),
        "--terms",
        "1",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn malformed_input_exits_with_two() {
    let cases: &[&[&str]] = &[
        &["membership", r#"{"alpha": "#],
        &["membership", "/definitely/not/here.json"],
        &["build", "--alpha", r#"{"zeros": []}"#, "--symbol", "z"],
        &[
            "build",
            "--alpha",
            r#"{"zeros": [[0.97, 0]]}"#,
            "--symbol",
            "z",
        ],
        &["build", "--alpha", Z2, "--symbol", "z^17"],
        &["build", "--alpha", Z2, "--symbol", "z +"],
        &[
            "build",
            "--alpha",
            Z2,
            "--beta",
            Z3,
            "--symbol",
            r#"{"chi":{"coords":[[1,0]]},"psi":{"coords":[]}}"#,
        ],
        &["shift", "--alpha", Z2, "--quad-nodes", "1000"],
        &["shift", "--alpha", Z2, "--tol", "-1"],
        &["membership"],
        &["suite", "--trials", "0"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = atto(args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn zero_cap_override_warns_and_keeps_accuracy() {
    let alpha = r#"{"zeros":[[0.97,0]]}"#;
    let out = atto(&[
        "build",
        "--alpha",
        alpha,
        "--symbol",
        "z",
        "--zero-cap",
        "0.98",
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    // on the one-dimensional space K_alpha, S_alpha is multiplication by the zero
    let m = matrix(&json(&out));
    assert!((m[0][0].0 - 0.97).abs() < 1e-12 && m[0][0].1.abs() < 1e-12);
}

#[test]
fn suite_is_reproducible_and_passes() {
    let args = [
        "suite",
        "--seed",
        "17",
        "--trials",
        "3",
        "--deg-alpha",
        "4",
        "--deg-beta",
        "3",
    ];
    let first = atto(&args);
    let second = atto(&args);
    assert_eq!(
        code(&first),
        0,
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(first.stdout, second.stdout);
    let report = json(&first);
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["config"]["seed"], Value::from(17));
    assert!(!String::from_utf8_lossy(&first.stdout).contains("elapsed"));
    assert!(String::from_utf8_lossy(&first.stderr).contains("aggregate: PASS"));

    let other = atto(&[
        "suite",
        "--seed",
        "18",
        "--trials",
        "3",
        "--deg-alpha",
        "4",
        "--deg-beta",
        "3",
    ]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn suite_flags_infeasible_tolerance() {
    let out = atto(&["suite", "--trials", "2", "--tol", "1e-16"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["pass"], Value::Bool(false));
    let checks = report["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["tolerance_infeasible"] == Value::Bool(true)));
    for c in checks {
        if c["verdict"] == Value::Bool(false) {
            assert_eq!(c["tolerance_infeasible"], Value::Bool(true), "{c}");
        }
    }
}

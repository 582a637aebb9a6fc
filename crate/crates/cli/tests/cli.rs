use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn spintomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spintomo"))
        .args(args)
        .env_remove("SPINTOMO_LOG")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
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

fn close(v: &Value, want: f64, tol: f64) {
    let got = v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"));
    assert!((got - want).abs() <= tol, "got {got}, want {want} ± {tol}");
}

#[test]
fn validate_exit_codes() {
    let ok = spintomo(&["validate", "--state", "werner:0.5"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["passed"], true);

    let bad = spintomo(&["validate", "--state", "werner:1.5"]);
    assert_eq!(code(&bad), 1);
    let report = json(&bad);
    assert_eq!(report["positive"], false);
    close(&report["min_eigenvalue"], -0.125, 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("truncated.json");
    fs::write(&path, r#"{"dim": 4, "re": [[0.25, 0"#).unwrap();
    let trunc = spintomo(&["validate", "--state", path.to_str().unwrap()]);
    assert_eq!(code(&trunc), 2);
    assert!(String::from_utf8_lossy(&trunc.stderr).contains("malformed"));
}

#[test]
fn validate_rejects_unsupported_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.json");
    let z = vec![vec![0.0; 3]; 3];
    let body = serde_json::json!({ "dim": 3, "re": z, "im": z });
    fs::write(&path, body.to_string()).unwrap();
    assert_eq!(
        code(&spintomo(&["validate", "--state", path.to_str().unwrap()])),
        2
    );
}

#[test]
fn qudit_tomogram_at_beta_zero() {
    let out = spintomo(&[
        "tomogram",
        "--state",
        "werner:0.5",
        "--rep",
        "qudit",
        "--m",
        "3/2",
        "--beta",
        "0",
    ]);
    assert_eq!(code(&out), 0);
    let rows = &json(&out)["rows"];
    assert_eq!(rows.as_array().unwrap().len(), 1);
    close(&rows[0]["value"], 0.375, 1e-12);
}

#[test]
fn two_qubit_tomogram_and_csv() {
    let out = spintomo(&[
        "tomogram",
        "--state",
        "werner:0.8",
        "--m1",
        "1/2",
        "--m2",
        "1/2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "representation,m1,m2,phi1,theta1,psi1,phi2,theta2,psi2,value"
    );
    let value: f64 = lines
        .next()
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 0.45).abs() < 1e-12);
    assert!(lines.next().is_none());
}

#[test]
fn mixed_state_tomogram_is_flat() {
    let out = spintomo(&[
        "tomogram", "--state", "werner:0", "--rep", "qudit", "--alpha", "1.1", "--beta", "2.0",
    ]);
    for row in json(&out)["rows"].as_array().unwrap() {
        close(&row["value"], 0.25, 1e-12);
    }
}

#[test]
fn full_grid_tomogram_has_every_node() {
    let out = spintomo(&[
        "tomogram",
        "--state",
        "werner:0.3",
        "--rep",
        "qudit",
        "--full-grid",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 4 * 64);
}

#[test]
fn representation_mismatch_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qudit.json");
    let mut re = vec![vec![0.0; 4]; 4];
    for (i, row) in re.iter_mut().enumerate() {
        row[i] = 0.25;
    }
    let body = serde_json::json!({ "dim": 4, "re": re, "im": vec![vec![0.0; 4]; 4], "basis": "qudit_3_2" });
    fs::write(&path, body.to_string()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(
        code(&spintomo(&["tomogram", "--state", p, "--rep", "two_qubit"])),
        2
    );
    assert_eq!(code(&spintomo(&["tomogram", "--state", p])), 0);
}

#[test]
fn reconstruct_round_trips() {
    let two = spintomo(&["reconstruct", "--state", "werner:0.7", "--rep", "two_qubit"]);
    assert_eq!(code(&two), 0);
    assert!(json(&two)["residual"].as_f64().unwrap() <= 1e-10);

    let mixed = spintomo(&["reconstruct", "--state", "mixed"]);
    assert!(json(&mixed)["residual"].as_f64().unwrap() <= 1e-12);

    let qudit = spintomo(&[
        "reconstruct",
        "--state",
        "random",
        "--seed",
        "42",
        "--rep",
        "qudit",
    ]);
    assert_eq!(code(&qudit), 0);
    let v = json(&qudit);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["quantizer"]["authority"].is_string() || v["quantizer"]["authority"].is_object());
}

#[test]
fn coarse_grid_is_usage_error() {
    let out = spintomo(&[
        "reconstruct",
        "--state",
        "werner:0.7",
        "--grid-azimuth",
        "4",
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(
        code(&spintomo(&[
            "map",
            "--state",
            "werner:0.5",
            "--grid-polar",
            "3"
        ])),
        2
    );
}

#[test]
fn map_qudit_to_two_qubit() {
    let out = spintomo(&[
        "map",
        "--state",
        "werner:0.5",
        "--direction",
        "qudit-to-2q",
        "--m1",
        "1/2",
        "--m2",
        "1/2",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    close(&v["value"], 0.375, 1e-8);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);

    let flat = json(&spintomo(&[
        "map",
        "--state",
        "werner:0",
        "--direction",
        "2q-to-qudit",
        "--m",
        "-1/2",
        "--beta",
        "1.0",
    ]));
    close(&flat["value"], 0.25, 1e-8);
}

#[test]
fn map_round_trip() {
    let out = spintomo(&[
        "map",
        "--state",
        "werner:1",
        "--direction",
        "round-trip",
        "--m",
        "1/2",
        "--beta",
        "0.7",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["intermediate_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn correlation_forms_agree() {
    let out = spintomo(&[
        "correlation",
        "--state",
        "random:7",
        "--k1",
        "0.6,0,0.8",
        "--k2",
        "-y",
    ]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["max_pairwise_deviation"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn steering_reports() {
    let v = json(&spintomo(&["steering", "--state", "werner:0.4"]));
    close(&v["correlation_forms"]["direct"], 0.4, 1e-12);
    let t = &v["tensor"];
    for (i, d) in [0.4, -0.4, 0.4].into_iter().enumerate() {
        close(&t[i][i], d, 1e-12);
    }
    close(&v["chsh_max"], 2.0 * 2f64.sqrt() * 0.4, 1e-3);
    assert_eq!(v["notes"].as_array().unwrap().len(), 2);

    let one = json(&spintomo(&["steering", "--state", "werner:1"]));
    close(&one["chsh_max"], 2.0 * 2f64.sqrt(), 1e-3);
    assert_eq!(one["bell_violated"], true);

    let zero = spintomo(&["steering", "--state", "werner:0"]);
    assert_eq!(code(&zero), 0);
    let zero = json(&zero);
    close(&zero["lhs"], 0.0, 1e-12);
    close(&zero["chsh_max"], 0.0, 1e-12);
}

#[test]
fn bad_direction_is_usage_error() {
    assert_eq!(
        code(&spintomo(&[
            "steering",
            "--state",
            "werner:0.4",
            "--k1",
            "1,1,0"
        ])),
        2
    );
    assert_eq!(
        code(&spintomo(&[
            "correlation",
            "--state",
            "werner:0.4",
            "--k2",
            "w"
        ])),
        2
    );
}

#[test]
fn selftest_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let first = spintomo(&["selftest", "--seed", "5", "--out", a.to_str().unwrap()]);
    assert_eq!(
        code(&first),
        0,
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&first.stderr)
            .lines()
            .filter(|l| l.contains(" PASS "))
            .count(),
        12
    );
    spintomo(&["selftest", "--seed", "5", "--out", b.to_str().unwrap()]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let coarse = spintomo(&["selftest", "--force-coarse"]);
    assert_eq!(code(&coarse), 1);
    assert!(String::from_utf8_lossy(&coarse.stderr).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&spintomo(&[])), 2);
    assert_eq!(code(&spintomo(&["frobnicate"])), 2);
    assert_eq!(code(&spintomo(&["tomogram"])), 2);
    assert_eq!(code(&spintomo(&["tomogram", "--state", "werner:abc"])), 2);
    assert_eq!(code(&spintomo(&["tomogram", "--state", "werner:1.5"])), 2);
    assert_eq!(
        code(&spintomo(&[
            "tomogram",
            "--state",
            "werner:0.5",
            "--rep",
            "qudit",
            "--m",
            "5/2"
        ])),
        2
    );
    assert_eq!(
        code(&spintomo(&[
            "tomogram",
            "--state",
            "werner:0.5",
            "--rep",
            "qudit",
            "--beta",
            "4"
        ])),
        2
    );
    assert_eq!(
        code(&spintomo(&[
            "tomogram",
            "--state",
            "werner:0.5",
            "--theta1",
            "-0.1"
        ])),
        2
    );
    assert_eq!(
        code(&spintomo(&[
            "validate",
            "--state",
            "/nonexistent/file.json"
        ])),
        2
    );
}

#[test]
fn report_csv_is_flat_key_value() {
    let out = spintomo(&["map", "--state", "werner:0.5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.lines().any(|l| l.starts_with("value,")));
}

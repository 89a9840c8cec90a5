// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn krausloom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krausloom"))
        .args(args)
        .env_remove("KRAUSLOOM_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = krausloom(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn entry(m: &Value, i: usize, j: usize) -> (f64, f64) {
    (m["re"][i][j].as_f64().unwrap(), m["im"][i][j].as_f64().unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prepare_ground_state() {
    let v = json_stdout(&["prepare", "--theta1", "0", "--theta2", "0"]);
    let re = v["state"]["re"].as_array().unwrap();
    assert_eq!(v["state"]["dims"], serde_json::json!([2, 2, 2]));
    assert_eq!(re[0].as_f64(), Some(1.0));
    assert!(re[1..].iter().all(|x| x.as_f64() == Some(0.0)));
}

#[test]
fn prepare_equal_superposition_has_half_coherence() {
    let v = json_stdout(&["prepare", "--theta1", "1.5707963", "--theta2", "0"]);
    let (re, im) = entry(&v["rho_s"], 0, 1);
    assert!((re - 0.5).abs() < 1e-7 && im.abs() < 1e-12, "{re} {im}");
}

#[test]
fn malformed_angle_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let out_file = dir.path().join("out.json");
    for bad in ["abc", "NaN", "inf"] {
        let out = krausloom(&["prepare", "--theta1", bad, "--out", path_str(&out_file)]);
        assert_eq!(code(&out), 2, "{bad}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("theta1"), "{bad}");
        assert!(!out_file.exists());
    }
}

#[test]
fn dephasing_removes_coherence() {
    let v = json_stdout(&["channel", "--channel", "dephasing", "--p", "1", "--theta1", "1.5707963267948966"]);
    for key in ["rho_lattice", "rho_kraus"] {
        let (re, im) = entry(&v[key], 0, 1);
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12, "{key}");
    }
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn full_gad_reaches_the_thermal_state() {
    for theta1 in ["0", "1.1", "3.14159"] {
        let v = json_stdout(&["channel", "--channel", "gad", "--p", "1", "--alpha2-sq", "0.7", "--theta1", theta1]);
        for key in ["rho_lattice", "rho_kraus"] {
            let m = &v[key];
            assert!((entry(m, 0, 0).0 - 0.7).abs() < 1e-12, "{key} {theta1}");
            assert!((entry(m, 1, 1).0 - 0.3).abs() < 1e-12, "{key} {theta1}");
            assert!(entry(m, 0, 1).0.abs() < 1e-12);
        }
    }
}

#[test]
fn sgad_reduction_matches_gad() {
    let common = ["--theta1", "0.9", "--phi1", "0.4", "--alpha2-sq", "0.35"];
    let gad = json_stdout(&[&["channel", "--channel", "gad", "--p", "0.3"][..], &common].concat());
    let sgad = json_stdout(
        &[
            &["channel", "--channel", "sgad", "--sgad-beta", "0.3", "--sgad-mu", "0.3"][..],
            &common,
        ]
        .concat(),
    );
    for i in 0..2 {
        for j in 0..2 {
            let (a, b) = (entry(&gad["rho_kraus"], i, j), entry(&sgad["rho_lattice"], i, j));
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
    }
}

#[test]
fn pauli_channel_runs_through_both_paths() {
    let v = json_stdout(&["channel", "--channel", "pauli", "--p", "0.4", "--theta1", "1.0", "--phi1", "0.7"]);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);
    let partial = krausloom(&["channel", "--channel", "pauli", "--p", "0.4", "--q1", "1"]);
    assert_eq!(code(&partial), 2);
}

#[test]
fn channel_needs_a_probability() {
    let out = krausloom(&["channel", "--channel", "gad"]);
    assert_eq!(code(&out), 2);
    let out = krausloom(&["channel", "--channel", "gad", "--p", "1.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn negative_tolerance_forces_consistency_failure() {
    let dir = TempDir::new().unwrap();
    let out_file = dir.path().join("c.json");
    let out = Command::new(env!("CARGO_BIN_EXE_krausloom"))
        .args(["channel", "--channel", "dephasing", "--p", "0.5", "--out", path_str(&out_file)])
        .env("KRAUSLOOM_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(out_file.exists(), "diagnostics are still written");
    let out = Command::new(env!("CARGO_BIN_EXE_krausloom"))
        .args(["channel-dump", "--channel", "gad", "--p", "0.5"])
        .env("KRAUSLOOM_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn channel_dump_lists_kraus_operators() {
    let v = json_stdout(&["channel-dump", "--channel", "gad", "--p", "0.2", "--alpha2-sq", "0.5"]);
    let kraus: Vec<&String> = v.as_object().unwrap().keys().filter(|k| k.starts_with("kraus.")).collect();
    assert_eq!(kraus.len(), 4);
    assert!(v["completeness_residual"].as_f64().unwrap() < 1e-12);
    assert!(v["lattice_action_distance"].as_f64().unwrap() < 1e-12);
}

#[test]
fn noiseless_tomography_recovers_the_state() {
    let v = json_stdout(&["tomography", "--theta1", "0.8", "--theta2", "1.9", "--phi1", "0.3"]);
    assert!((v["fidelity_linear"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["fidelity_ml"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    let v = json_stdout(&["tomography", "--channel", "gad", "--theta3", "0.6", "--theta2", "0.9", "--theta1", "0.4"]);
    assert!((v["fidelity_linear"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn seeded_noisy_tomography_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let counts = dir.path().join(format!("{name}.counts"));
        let o = krausloom(&[
            "tomography", "--theta1", "0.7", "--shots", "5000", "--noise", "--seed", "11",
            "--out", path_str(&out), "--counts-out", path_str(&counts),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read(out).unwrap(), std::fs::read(counts).unwrap())
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn counts_file_feeds_back_into_tomography() {
    let dir = TempDir::new().unwrap();
    let counts = dir.path().join("counts.csv");
    let first = json_stdout(&[
        "tomography", "--theta1", "1.2", "--shots", "2000", "--noise", "--seed", "4",
        "--counts-out", path_str(&counts),
    ]);
    let second = json_stdout(&["tomography", "--theta1", "1.2", "--counts-in", path_str(&counts)]);
    assert_eq!(first["ml"], second["ml"]);
}

#[test]
fn noise_without_shots_exits_2() {
    assert_eq!(code(&krausloom(&["tomography", "--noise"])), 2);
}

#[test]
fn missing_input_file_exits_4() {
    let out = krausloom(&["tomography", "--counts-in", "/nonexistent/counts.csv"]);
    assert_eq!(code(&out), 4);
    let out = krausloom(&["prepare", "--out", "/nonexistent/dir/out.json"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn reproduce_gad_default_passes() {
    let v = json_stdout(&["reproduce-gad"]);
    let f = v["fidelity"].as_f64().unwrap();
    assert!((0.92..=0.98).contains(&f), "{f}");
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn reproduce_gad_other_angles_are_informational() {
    let v = json_stdout(&["reproduce-gad", "--theta3", "1.5707963267948966"]);
    assert_eq!(v["verdict"], "informational");
    assert!(v["fidelity"].as_f64().unwrap().is_finite());
}

#[test]
fn reproduce_gad_emits_theory() {
    let dir = TempDir::new().unwrap();
    let theory = dir.path().join("ideal.json");
    let v = json_stdout(&["reproduce-gad", "--emit-theory", path_str(&theory)]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&theory).unwrap()).unwrap();
    assert_eq!(written["ideal"], v["ideal"]);
}

#[test]
fn csv_output_has_fixed_precision() {
    let out = krausloom(&["prepare", "--theta1", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("field,row,col,re,im\n"));
    let line = text.lines().find(|l| l.starts_with("rho_s,0,0,")).unwrap();
    let re = line.split(',').nth(3).unwrap();
    assert_eq!(re.split('e').next().unwrap().len(), 13, "{re}");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "channel = \"dephasing\"\np = 1.0\ntheta1 = 1.5707963267948966\n").unwrap();
    let v = json_stdout(&["channel", "--config", path_str(&config)]);
    assert!(entry(&v["rho_kraus"], 0, 1).0.abs() < 1e-12);
    let v = json_stdout(&["channel", "--config", path_str(&config), "--p", "0"]);
    assert!((entry(&v["rho_kraus"], 0, 1).0 - 0.5).abs() < 1e-12);

    std::fs::write(&config, "chanel = \"gad\"\n").unwrap();
    assert_eq!(code(&krausloom(&["channel", "--config", path_str(&config)])), 2);
}

#[test]
fn evolve_runs_saved_circuits_and_projections() {
    let dir = TempDir::new().unwrap();
    let circuit = dir.path().join("circuit.json");
    let direct = json_stdout(&[
        "channel", "--channel", "gad", "--p", "0.4", "--theta1", "0.5", "--emit-circuit", path_str(&circuit),
    ]);
    assert!(direct["max_deviation"].as_f64().unwrap() < 1e-9);
    let v = json_stdout(&["evolve", "--circuit", path_str(&circuit)]);
    assert_eq!(v["through"], "evolve");
    assert!(!v["modes"].as_array().unwrap().is_empty());

    let v = json_stdout(&["evolve", "--theta1", "0", "--theta2", "0", "--setting", "1"]);
    let total = v["detection"]["total"].as_f64().unwrap();
    assert!((total - 1.0).abs() < 1e-12, "HH on |00> is certain, got {total}");

    std::fs::write(&circuit, "{\"register\": []}").unwrap();
    assert_eq!(code(&krausloom(&["evolve", "--circuit", path_str(&circuit)])), 2);
}

#[test]
fn grid_writes_points_and_index() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sweep");
    let o = krausloom(&[
        "channel", "--channel", "gad", "--grid", "p=0:1:3", "--grid", "theta1=0:1:2", "--out", path_str(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let index: Value = serde_json::from_str(&std::fs::read_to_string(out.join("index.json")).unwrap()).unwrap();
    let points = index["points"].as_array().unwrap();
    assert_eq!(points.len(), 6);
    for p in points {
        assert_eq!(p["exit_code"], 0);
        assert!(out.join(p["file"].as_str().unwrap()).exists());
    }
    assert_eq!(points[5]["values"]["p"], 1.0);

    let bad = krausloom(&["channel", "--channel", "gad", "--grid", "p=0:2:3", "--out", path_str(&out)]);
    assert_eq!(code(&bad), 2);
    assert_eq!(code(&krausloom(&["prepare", "--grid", "p=0:1:2"])), 2);
}

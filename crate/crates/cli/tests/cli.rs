use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_ghz_passes() {
    let out = qdist(&[
        "run", "--preset", "ghz", "--n", "3", "--seed", "7", "--trials", "100",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&out);
    assert_eq!(report["passed"], true);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 100);
    for r in results {
        assert!(r["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
        assert_eq!(r["transcript"].as_array().unwrap().len(), 3);
        assert_eq!(r["ledger"]["ebits"], 3);
        assert_eq!(r["ledger"]["cbits_forward"], 6);
        assert_eq!(r["ledger"]["cbits_backward"], 0);
    }
    let entry = &results[0]["transcript"][0];
    for key in ["step", "outcome", "cbits", "correction"] {
        assert!(entry.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn zero_qubits_is_a_usage_error() {
    let out = qdist(&["run", "--preset", "ghz", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn bell_preset_needs_two_qubits() {
    assert_eq!(
        qdist(&["run", "--preset", "bell", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn too_many_parties_is_a_usage_error() {
    assert_eq!(
        qdist(&["run", "--preset", "w", "--n", "3", "--parties", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bell_outcome_frequencies_are_uniform() {
    let trials = 10_000;
    let out = qdist(&[
        "run",
        "--preset",
        "bell",
        "--n",
        "2",
        "--trials",
        &trials.to_string(),
        "--seed",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let total = 2.0 * trials as f64;
    let sigma = (0.25f64 * 0.75 / total).sqrt();
    let freqs = report["outcome_frequencies"].as_object().unwrap();
    assert_eq!(freqs.len(), 4);
    for (kind, f) in freqs {
        let f = f.as_f64().unwrap();
        assert!((f - 0.25).abs() < 4.0 * sigma, "{kind}: {f}");
    }
}

#[test]
fn verify_ghz_checks_every_word() {
    let out = qdist(&["verify", "--preset", "ghz", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["branch_words"]["mode"], "exhaustive");
    assert_eq!(report["branch_words"]["count"], 64);
    assert_eq!(report["branch_words"]["passed"], true);
    let oracle = report["oracle"].as_array().unwrap();
    assert_eq!(oracle.len(), 3);
    assert!(oracle
        .iter()
        .all(|r| r["passed"] == true && r["teleportation"] == false));
}

#[test]
fn verify_product_flags_teleportation() {
    let out = qdist(&["verify", "--preset", "product", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let oracle = report["oracle"].as_array().unwrap();
    assert!(oracle.iter().all(|r| r["teleportation"] == true));
    let checks = report["teleportation"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_samples_large_plans() {
    let out = qdist(&["verify", "--n", "6", "--trials", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["branch_words"]["mode"], "sampled");
    assert_eq!(report["branch_words"]["count"], 20);
}

#[test]
fn unnormalized_state_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(
        &file,
        r#"{"labels":[0,1],"amplitudes":[[1.0,0.0],[0.5,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = qdist(&["run", "--state", path(&file)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("norm"));
}

#[test]
fn missing_state_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdist(&["run", "--state", path(&dir.path().join("none.json"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_ghz_writes_the_expected_vector() {
    let out = qdist(&["gen", "ghz", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let state = json(&out);
    assert_eq!(state["labels"], serde_json::json!([0, 1, 2]));
    let amps = state["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 8);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (k, a) in amps.iter().enumerate() {
        let expected = if k == 0 || k == 7 { h } else { 0.0 };
        assert!((a[0].as_f64().unwrap() - expected).abs() < 1e-15);
        assert_eq!(a[1].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn gen_random_is_seeded_and_normalized() {
    let a = qdist(&["gen", "random-haar", "4", "--seed", "9"]);
    let b = qdist(&["gen", "random-haar", "4", "--seed", "9"]);
    let c = qdist(&["gen", "random-haar", "4", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let norm: f64 = json(&a)["amplitudes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x[0].as_f64().unwrap().powi(2) + x[1].as_f64().unwrap().powi(2))
        .sum();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn generated_state_and_plan_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let out = qdist(&[
        "gen",
        "random-haar",
        "3",
        "--seed",
        "5",
        "--out",
        path(&state),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let plan = dir.path().join("plan.json");
    std::fs::write(
        &plan,
        r#"{"sender":"alice","receivers":["bob","carol"],"steps":[
            {"source":2,"mu":10,"nu":11,"receiver":"carol"},
            {"source":0,"mu":12,"nu":13,"receiver":"bob"},
            {"source":1,"mu":14,"nu":15,"receiver":"bob"}]}"#,
    )
    .unwrap();
    let out = qdist(&[
        "run",
        "--state",
        path(&state),
        "--plan",
        path(&plan),
        "--trials",
        "20",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json(&out)["plan"]["steps"][0]["receiver"], "carol");
}

#[test]
fn plan_with_unknown_source_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    std::fs::write(
        &plan,
        r#"{"sender":"alice","receivers":["bob"],"steps":[{"source":7,"mu":10,"nu":11,"receiver":"bob"}]}"#,
    )
    .unwrap();
    let out = qdist(&["run", "--preset", "ghz", "--n", "2", "--plan", path(&plan)]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn identical_configs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = qdist(&[
            "run",
            "--n",
            "4",
            "--parties",
            "2",
            "--seed",
            "42",
            "--trials",
            "30",
            "--out",
            path(p),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn generated_plan_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let out = qdist(&["gen", "plan", "4", "--parties", "3", "--out", path(&plan)]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&plan).unwrap()).unwrap();
    assert_eq!(written["receivers"].as_array().unwrap().len(), 3);
    assert_eq!(written["steps"].as_array().unwrap().len(), 4);
    let out = qdist(&["run", "--n", "4", "--plan", path(&plan), "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        qdist(&["gen", "plan", "2", "--parties", "3"]).status.code(),
        Some(2)
    );
}

//! End-to-end checks of the batch front end: run/sweep/compare artifacts,
//! CSV schemas and row counts, JSON echoes, and the binary's exit codes.

use std::process::Command;

use diratom::cli::{
    cmd_compare, cmd_run, cmd_sweep, parse_config, CliError, ParsedConfig, RunConfig, SweepConfig,
};

const RABI_RUN: &str = r#"
model_kind = "transformed_literal"
coupling = "alpha_e"
t0 = 0.0
t1 = 200.0
dt = 0.01
sample_stride = 5
output_prefix = "rabi"
initial_state = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
seed = 7

[params]
mass = 1.0
omega = 0.25
mu = 1.0

[field]
type = "static"
amplitude = [0.0, 0.0, 0.5]
"#;

fn parse_run(text: &str) -> RunConfig {
    match parse_config(text).expect("config should parse") {
        ParsedConfig::Run(run) => run,
        ParsedConfig::Sweep(_) => panic!("expected a run config"),
    }
}

#[test]
fn run_writes_csv_and_json_with_expected_shape() {
    let run = parse_run(RABI_RUN);
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_run(&run, dir.path(), true).unwrap();

    let csv = std::fs::read_to_string(&artifacts.csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "t,norm,pop1,pop2,pop3,pop4,pop_radiant,pop_absorptive,dx,dy,dz"
    );
    // Header plus samples including both endpoints.
    let expected = 1 + (200.0f64 / (0.01 * 5.0)).ceil() as i64;
    assert!(
        (lines.len() as i64 - expected).abs() <= 1,
        "{} lines",
        lines.len()
    );

    // The {2,4} block oscillates at 2 mu E0 = 1.
    let freq = artifacts
        .summary
        .oscillation_frequency
        .expect("oscillation expected");
    assert!((freq - 1.0).abs() < 0.01, "frequency {freq}");
    assert!(artifacts.summary.final_norm_drift < 1e-10);
    assert_eq!(artifacts.summary.weak_field_ratio, None);
    assert_eq!(artifacts.summary.weak_field_ok, None);

    // The JSON echo materializes defaults for exact replay.
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&artifacts.json_path).unwrap()).unwrap();
    assert_eq!(json["config"]["params"]["hbar"], 1.0);
    assert_eq!(json["config"]["integrator"], "exp_midpoint");
    assert_eq!(json["config"]["seed"], 7);
    assert_eq!(json["config"]["initial_state"][1][0], 1.0);
    assert!(json["steps_per_second"].as_f64().unwrap() > 0.0);
}

#[test]
fn zero_field_run_has_constant_populations_and_no_frequency() {
    let doc = RABI_RUN
        .replace("coupling = \"alpha_e\"", "coupling = \"none\"")
        .replace(
            "type = \"static\"\namplitude = [0.0, 0.0, 0.5]",
            "type = \"zero\"",
        )
        .replace("t1 = 200.0", "t1 = 5.0");
    let run = parse_run(&doc);
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_run(&run, dir.path(), true).unwrap();
    assert_eq!(artifacts.summary.oscillation_frequency, None);

    let csv = std::fs::read_to_string(&artifacts.csv_path).unwrap();
    let mut rows = csv.lines().skip(1).map(|line| {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        cols
    });
    let first = rows.next().unwrap();
    for row in rows {
        for k in 1..=5 {
            assert_eq!(row[k], first[k], "population column {k} changed");
        }
    }
}

#[test]
fn strong_field_flagged_but_still_runs() {
    let doc = RABI_RUN
        .replace("[params]", "[params]\ngamma = 1.0")
        .replace("amplitude = [0.0, 0.0, 0.5]", "amplitude = [0.0, 0.0, 2.0]");
    let run = parse_run(&doc);
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_run(&run, dir.path(), true).unwrap();
    assert_eq!(artifacts.summary.weak_field_ratio, Some(2.0));
    assert_eq!(artifacts.summary.weak_field_ok, Some(false));
}

#[test]
fn sweep_extracts_linear_rabi_frequencies() {
    let doc =
        format!("{RABI_RUN}\n[sweep]\naxis = \"field.amplitude.z\"\nvalues = [0.5, 1.0, 2.0]\n");
    let ParsedConfig::Sweep(sweep) = parse_config(&doc).unwrap() else {
        panic!("expected sweep");
    };
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_sweep(&sweep, dir.path(), 2, true).unwrap();
    assert!(artifacts.all_ok());
    assert_eq!(artifacts.exit_code(), 0);

    for index in 0..3 {
        assert!(dir.path().join(format!("rabi_{index}.csv")).exists());
        assert!(dir.path().join(format!("rabi_{index}.json")).exists());
    }
    let aggregate = std::fs::read_to_string(&artifacts.aggregate_csv).unwrap();
    let lines: Vec<&str> = aggregate.lines().collect();
    assert_eq!(
        lines[0],
        "value,oscillation_frequency,final_norm_drift,status"
    );
    assert_eq!(lines.len(), 4);
    // Frequencies are linear in the amplitude: 2 mu E0.
    for (line, (value, expected)) in lines[1..].iter().zip([(0.5, 1.0), (1.0, 2.0), (2.0, 4.0)]) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].parse::<f64>().unwrap(), value);
        let freq: f64 = cols[1].parse().unwrap();
        assert!(
            (freq - expected).abs() < 0.01 * expected,
            "value {value}: frequency {freq} vs {expected}"
        );
        assert_eq!(cols[3], "ok");
    }
}

#[test]
fn sweep_records_per_value_failures() {
    let base = parse_run(&RABI_RUN.replace("t1 = 200.0", "t1 = 2.0"));
    let sweep = SweepConfig {
        base,
        axis: "dt".into(),
        values: vec![0.01, -1.0],
    };
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_sweep(&sweep, dir.path(), 1, true).unwrap();
    assert!(!artifacts.all_ok());
    assert_eq!(artifacts.exit_code(), 1);
    assert!(artifacts.results[0].is_ok());
    assert!(artifacts.results[1].is_err());

    let aggregate = std::fs::read_to_string(&artifacts.aggregate_csv).unwrap();
    let lines: Vec<&str> = aggregate.lines().collect();
    assert!(lines[1].ends_with(",ok"));
    assert!(
        lines[2].contains("dt"),
        "failure row should carry the error: {}",
        lines[2]
    );
}

#[test]
fn sweep_without_oscillation_leaves_frequency_empty() {
    let doc = RABI_RUN
        .replace("coupling = \"alpha_e\"", "coupling = \"none\"")
        .replace(
            "type = \"static\"\namplitude = [0.0, 0.0, 0.5]",
            "type = \"zero\"",
        )
        .replace("t1 = 200.0", "t1 = 2.0");
    let doc = format!("{doc}\n[sweep]\naxis = \"params.omega\"\nvalues = [0.1, 0.7]\n");
    let ParsedConfig::Sweep(sweep) = parse_config(&doc).unwrap() else {
        panic!()
    };
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_sweep(&sweep, dir.path(), 1, true).unwrap();
    assert!(artifacts.all_ok());
    let aggregate = std::fs::read_to_string(&artifacts.aggregate_csv).unwrap();
    for line in aggregate.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "", "expected empty frequency in {line}");
        assert_eq!(cols[3], "ok");
    }
}

const COMPARE_RUN: &str = r#"
model_kind = "transformed_literal"
coupling = "alpha_e"
t0 = 0.0
t1 = 40.0
dt = 0.005
output_prefix = "cmp"
initial_state = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]

[params]
mass = 1.0
omega = 0.5
mu = 1.0

[field]
type = "cosine"
amplitude = [0.0, 0.0, 0.05]
nu = 1.0
phase = 0.0
"#;

#[test]
fn compare_reports_three_deviations() {
    let run = parse_run(COMPARE_RUN);
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_compare(&run, dir.path(), true).unwrap();
    // Identity-shifted Hamiltonians: populations match to roundoff.
    assert!(artifacts.summary.baseline_vs_literal < 1e-8);
    // Resonant weak field, mc² = 1: the literal reading visibly differs.
    assert!(artifacts.summary.literal_vs_exact > 1e-3);
    // Interaction-picture equivalence holds to integrator accuracy.
    assert!(artifacts.summary.full_transformed_vs_exact < 1e-4);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&artifacts.json_path).unwrap()).unwrap();
    for key in [
        "baseline_vs_literal",
        "literal_vs_exact",
        "full_transformed_vs_exact",
    ] {
        assert!(json[key].is_number(), "missing {key}");
    }
}

#[test]
fn compare_massless_run_shows_exact_agreement() {
    let doc = COMPARE_RUN
        .replace("mass = 1.0", "mass = 0.0")
        .replace("t1 = 40.0", "t1 = 10.0");
    let run = parse_run(&doc);
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_compare(&run, dir.path(), true).unwrap();
    assert!(artifacts.summary.literal_vs_exact < 1e-12);
    assert!(artifacts.summary.full_transformed_vs_exact < 1e-12);
}

#[test]
fn compare_rejects_unsupported_configs() {
    let dir = tempfile::tempdir().unwrap();

    let doc = COMPARE_RUN.replace("[params]", "[params]\nmomentum = [0.0, 0.0, 0.3]");
    let err = cmd_compare(&parse_run(&doc), dir.path(), true).unwrap_err();
    assert!(matches!(err, CliError::Unsupported(_)));
    assert_eq!(err.exit_code(), 4);

    let doc = COMPARE_RUN.replace(
        "amplitude = [0.0, 0.0, 0.05]",
        "amplitude = [0.05, 0.0, 0.0]",
    );
    let err = cmd_compare(&parse_run(&doc), dir.path(), true).unwrap_err();
    assert!(matches!(err, CliError::Unsupported(_)));

    let doc = COMPARE_RUN.replace("coupling = \"alpha_e\"", "coupling = \"sigma_e\"");
    let err = cmd_compare(&parse_run(&doc), dir.path(), true).unwrap_err();
    assert!(matches!(err, CliError::Unsupported(_)));
}

#[test]
fn two_component_run_uses_two_level_schema() {
    let doc = r#"
model_kind = "baseline2"
coupling = "alpha_e"
t0 = 0.0
t1 = 30.0
dt = 0.01
output_prefix = "base"

[params]
mass = 1.0
omega = 0.5
omega_a = 1.0
mu = 1.0

[field]
type = "static"
amplitude = [0.5, 0.0, 0.0]
"#;
    let run = parse_run(doc);
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_run(&run, dir.path(), true).unwrap();
    let csv = std::fs::read_to_string(&artifacts.csv_path).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,norm,pop_upper,pop_lower");
    assert!(artifacts.summary.oscillation_frequency.is_some());
}

#[test]
fn json_echo_replays_exactly() {
    // The summary's config echo (defaults materialized) deserializes back
    // into the resolved config, so a run can be reproduced from its JSON.
    let run = parse_run(&RABI_RUN.replace("t1 = 200.0", "t1 = 2.0"));
    let dir = tempfile::tempdir().unwrap();
    let artifacts = cmd_run(&run, dir.path(), true).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&artifacts.json_path).unwrap()).unwrap();
    let replayed: RunConfig = serde_json::from_value(json["config"].clone()).unwrap();
    assert_eq!(replayed, run.resolved().unwrap());

    let dir2 = tempfile::tempdir().unwrap();
    let artifacts2 = cmd_run(&replayed, dir2.path(), true).unwrap();
    assert_eq!(
        std::fs::read(&artifacts.csv_path).unwrap(),
        std::fs::read(&artifacts2.csv_path).unwrap(),
    );
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(
        count >= 5,
        "expected the shipped example configs, found {count}"
    );
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diratom"))
}

#[test]
fn binary_algebra_check_exits_zero() {
    let out = binary().arg("algebra-check").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("beta1 not Dirac: [alpha_z, beta1] != 0"));
    assert!(text.contains("parity: beta sigma_x beta = sigma_x"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn binary_exit_codes() {
    // Missing file: I/O error, exit 2.
    let out = binary()
        .args(["run", "no_such_config.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Malformed config: exit 1.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "model_kind = \"nope\"\n").unwrap();
    let out = binary()
        .args(["run", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Sweep command on a run config: exit 1.
    let good = dir.path().join("good.toml");
    std::fs::write(&good, RABI_RUN.replace("t1 = 200.0", "t1 = 2.0")).unwrap();
    let out = binary()
        .args(["sweep", good.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // A real run into --output-dir: exit 0 and files exist.
    let out_dir = tempfile::tempdir().unwrap();
    let out = binary()
        .args(["--output-dir", out_dir.path().to_str().unwrap(), "--quiet"])
        .args(["run", good.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out_dir.path().join("rabi.csv").exists());
    assert!(out_dir.path().join("rabi.json").exists());
}

//! End-to-end CLI behavior: exit codes, config precedence, output files.

use std::path::Path;
use std::process::{Command, Output};

fn pdm_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdm-lab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn missing_config_file_exits_one_and_names_path() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pdm_lab(
        &["spectrum", "--config", "no-such-file.toml", "--out", "o"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("no-such-file.toml"), "stderr: {stderr}");
}

#[test]
fn negative_lambda_rejected_with_range_message() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pdm_lab(&["spectrum", "--lambda", "-1", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("lambda"), "stderr: {stderr}");
    assert!(stderr.contains("non-negative"), "stderr: {stderr}");
}

#[test]
fn unknown_config_key_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("bad.toml"),
        "[spectrum]\nlambda = 0.1\nmystery_knob = 3\n",
    )
    .unwrap();
    let out = pdm_lab(
        &["spectrum", "--config", "bad.toml", "--out", "o"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mystery_knob"), "stderr: {stderr}");
}

#[test]
fn flags_override_config_file_and_metadata_records_resolution() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.toml"),
        "[spectrum]\nlambda = 0.1\nn = 400\nr_max = 26.0\nk = 3\n",
    )
    .unwrap();
    let out = pdm_lab(
        &[
            "spectrum",
            "--config",
            "cfg.toml",
            "--lambda",
            "0.2",
            "--out",
            "o",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let meta = read_json(&tmp.path().join("o/metadata.json"));
    assert_eq!(meta["resolved_config"]["lambda"], 0.2);
    assert_eq!(meta["resolved_config"]["n"], 400);
    // tolerances are pinned in every metadata file
    assert!(meta["tolerances"]["tension_quadrature_rel_tol"].is_number());
}

#[test]
fn spectrum_lambda_zero_starts_at_half() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pdm_lab(&["spectrum", "--lambda", "0", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&tmp.path().join("o/spectrum.json"));
    let e0 = report["eigenvalues"][0].as_f64().unwrap();
    assert!((e0 - 0.5).abs() < 1e-3, "E0 = {e0}");
    // eigenfunction export parses and has the labelled header
    let csv = std::fs::read_to_string(tmp.path().join("o/eigenfunctions.csv")).unwrap();
    assert!(csv.starts_with("r,psi0,psi1"));
}

#[test]
fn string_zero_cutoff_reports_zero_tension() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pdm_lab(&["string", "--xi-c", "0", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&tmp.path().join("o/tension.json"));
    assert_eq!(report["mu_closed"], 0.0);
    assert_eq!(report["mu_quadrature"], 0.0);
}

#[test]
fn numerical_failure_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pdm_lab(
        &[
            "classical",
            "--lambda",
            "5",
            "--x0",
            "2",
            "--p0",
            "3",
            "--step",
            "50",
            "--steps",
            "5",
            "--out",
            "o",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error"), "stderr: {stderr}");
}

#[test]
fn positive_branch_grid_on_singular_locus_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    // the Λ > 0 branch of f = ζ is singular on |ζ| = 1, which this grid crosses
    let out = pdm_lab(
        &[
            "liouville",
            "--f",
            "linear",
            "--positive-branch",
            "--abs-lambda",
            "12",
            "--x-min",
            "0.5",
            "--x-max",
            "1.5",
            "--y-min",
            "-0.5",
            "--y-max",
            "0.5",
            "--spacing",
            "0.01",
            "--out",
            "o",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn custom_f_expression_from_json() {
    let tmp = tempfile::tempdir().unwrap();
    // f(ζ) = exp(0.5·ζ); complex coefficients serialize as [re, im]
    std::fs::write(
        tmp.path().join("f.json"),
        r#"{"kind":"exp","arg":{"kind":"scale","factor":[0.5,0.0],"arg":{"kind":"zeta"}}}"#,
    )
    .unwrap();
    let out = pdm_lab(
        &["liouville", "--f-json", "f.json", "--out", "o"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&tmp.path().join("o/residual.json"));
    let max_abs = report["residual"]["max_abs"].as_f64().unwrap();
    assert!(max_abs < 1e-3, "residual {max_abs} too large for an exact solution");
}

#[test]
fn identical_config_gives_byte_identical_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        let out = pdm_lab(
            &[
                "spectrum", "--lambda", "0.1", "--n", "400", "--r-max", "26", "--k", "3",
                "--out", dir,
            ],
            tmp.path(),
        );
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["spectrum.json", "eigenfunctions.csv"] {
        let a = std::fs::read(tmp.path().join("a").join(file)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn classical_default_run_measures_period() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pdm_lab(&["classical", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let run = read_json(&tmp.path().join("o/run.json"));
    let period = run["period"].as_f64().unwrap();
    // amplitude 0.1 at λ=1: T = 2π√(1+λA²) = 2π√1.01
    let expected = 2.0 * std::f64::consts::PI * 1.01f64.sqrt();
    assert!((period - expected).abs() / expected < 1e-3, "period {period}");
    assert!(run["relative_energy_drift"].as_f64().unwrap() <= 1e-8);
    let csv = std::fs::read_to_string(tmp.path().join("o/trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,x0,p0,E"));
}

#[test]
fn help_and_version_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(pdm_lab(&["--help"], tmp.path()).status.code(), Some(0));
    assert_eq!(pdm_lab(&["--version"], tmp.path()).status.code(), Some(0));
    // bad usage is a config-class failure
    assert_eq!(pdm_lab(&["bogus-subcommand"], tmp.path()).status.code(), Some(1));
}

//! End-to-end tests of the binary: exit codes, file emission, metadata
//! round-trips, schema goldens, and the verify mode.

use ab_vortex_cli::config::{OutputFormat, Subcmd};
use ab_vortex_cli::table::{parse_csv_metadata, parse_json_metadata};
use std::path::PathBuf;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ab-vortex"))
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stdout_of(args: &[&str]) -> String {
    let out = binary().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {args:?}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows of a CSV table (skips '#' metadata and the header row).
fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|line| !line.starts_with('#'))
        .skip(1)
        .map(|line| {
            line.split(',')
                .map(|cell| cell.parse::<f64>().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["cross-section", "--alpha", "abc"],
        vec!["cross-section"],
        vec!["cross-section", "--alpha", "0.25", "--phi-min", "0"],
        vec!["cross-section", "--alpha", "0.25", "--phi-max", "3.5"],
        vec!["hall", "--alpha", "0.25", "--n-v", "-1", "--n-e", "1"],
        vec!["unknown-subcommand"],
    ] {
        let out = binary().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "args: {args:?}");
    }
}

#[test]
fn numeric_failures_exit_2() {
    // alpha too large for an exact integer/fraction split passes parsing
    // but fails inside the library
    let out = binary()
        .args(["resonance", "--alpha", "1e300", "--e-bound-n", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn help_and_version_exit_0() {
    for args in [vec!["--help"], vec!["--version"], vec!["resonance", "--help"]] {
        let out = binary().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "args: {args:?}");
    }
}

#[test]
fn resonance_row_carries_both_routes() {
    let text = stdout_of(&["resonance", "--alpha", "0.25", "--e-bound-n", "1"]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let (eta, e_bound, closed, numeric, status) =
        (rows[0][0], rows[0][1], rows[0][2], rows[0][3], rows[0][4]);
    assert_eq!(eta, 0.25);
    assert_eq!(e_bound, 1.0);
    assert!((closed - 4.0).abs() <= 1e-11, "closed {closed}");
    assert!((numeric - 4.0).abs() <= 1e-8, "numeric {numeric}");
    assert_eq!(status, 0.0);
}

#[test]
fn resonance_outside_validity_reports_status() {
    let text = stdout_of(&["resonance", "--alpha", "0.75", "--e-bound-n1", "1"]);
    let rows = csv_rows(&text);
    // closed form unavailable (status bit 1); numeric root found in the
    // l = -n-1 channel
    assert!(rows[0][2].is_nan());
    assert!(rows[0][3] > 0.0);
    assert_eq!(rows[0][4], 1.0);
}

#[test]
fn conventional_cross_section_columns_coincide() {
    let text = stdout_of(&[
        "cross-section",
        "--alpha",
        "0.25",
        "--energy",
        "2",
        "--phi-steps",
        "32",
    ]);
    for row in csv_rows(&text) {
        let (total, standard, oracle, asym) = (row[1], row[2], row[3], row[4]);
        assert_eq!(total, standard);
        assert!((oracle - standard).abs() <= 1e-12 * standard.max(1.0));
        assert_eq!(asym, 0.0);
    }
}

#[test]
fn emitted_csv_file_recovers_its_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = binary()
        .args([
            "cross-section",
            "--alpha",
            "-0.75",
            "--energy",
            "3",
            "--e-bound-n",
            "1.2",
            "--phi-steps",
            "16",
            "--output",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let config = parse_csv_metadata(&text).unwrap();
    assert_eq!(config.subcommand, Subcmd::CrossSection);
    assert_eq!(config.alpha, -0.75);
    assert_eq!(config.energy, 3.0);
    assert_eq!(config.e_bound_n, Some(1.2));
    assert_eq!(config.e_bound_n1, None);
    assert_eq!(config.phi_steps, 16);
    assert_eq!(config.format, OutputFormat::Csv);
    assert_eq!(config.output.as_deref(), Some(path.as_path()));
}

#[test]
fn emitted_json_file_recovers_its_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = binary()
        .args([
            "hall",
            "--alpha",
            "0.25",
            "--energy",
            "2",
            "--e-bound-n",
            "1",
            "--n-v",
            "0.01",
            "--n-e",
            "1",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let config = parse_json_metadata(&text).unwrap();
    assert_eq!(config.subcommand, Subcmd::Hall);
    assert_eq!(config.n_v, Some(0.01));
    assert_eq!(config.format, OutputFormat::Json);
    // the emitted document is well-formed JSON
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn schema_goldens_are_stable() {
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let resonance = stdout_of(&["resonance", "--alpha", "0.25", "--e-bound-n", "1"]);
    let expected = std::fs::read_to_string(golden_dir.join("resonance.csv")).unwrap();
    assert_eq!(resonance, expected, "resonance.csv golden drifted");

    let hall = stdout_of(&[
        "hall",
        "--alpha",
        "0.25",
        "--energy",
        "2",
        "--e-bound-n",
        "1",
        "--n-v",
        "0.01",
        "--n-e",
        "1",
        "--format",
        "json",
    ]);
    let expected = std::fs::read_to_string(golden_dir.join("hall.json")).unwrap();
    assert_eq!(hall, expected, "hall.json golden drifted");
}

#[test]
fn file_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = binary()
            .args([
                "sweep",
                "--alpha-start",
                "0",
                "--alpha-stop",
                "1",
                "--alpha-steps",
                "11",
                "--energy",
                "2",
                "--e-bound-n",
                "1",
                "--n-v",
                "0.01",
                "--n-e",
                "1",
                "--output",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    // file contents are byte-identical, apart from the differing output path
    // echoed in the metadata
    let ta = std::fs::read_to_string(&a).unwrap().replace("a.csv", "");
    let tb = std::fs::read_to_string(&b).unwrap().replace("b.csv", "");
    assert_eq!(ta, tb);
}

#[test]
fn verify_passes_on_the_committed_report() {
    let out = binary()
        .current_dir(workspace_root())
        .arg("verify")
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "verify output:\n{stdout}");
    assert!(stdout.contains("ok reconciliation-report-fresh"));
    assert!(stdout.contains("expected-fail conventional-reduction-1e8"));
    assert!(stdout.contains("expected-fail phase-flip-1e12"));
}

#[test]
fn verify_fails_on_a_stale_report() {
    let dir = tempfile::tempdir().unwrap();
    let stale = dir.path().join("reconciliation.json");
    let committed = workspace_root().join("reports/reconciliation.json");
    let mut text = std::fs::read_to_string(committed).unwrap();
    text = text.replace("0.25", "0.26"); // poison a number
    std::fs::write(&stale, text).unwrap();
    let out = binary()
        .current_dir(workspace_root())
        .args(["verify", "--report", stale.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL reconciliation-report-fresh"));
}

#[test]
fn verify_rejects_missing_report() {
    let out = binary()
        .current_dir(workspace_root())
        .args(["verify", "--report", "/nonexistent/report.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn phase_shift_table_shows_the_resonant_channel() {
    // at the resonance energy the l = -n correction sits at pi/2
    let text = stdout_of(&[
        "phase-shift",
        "--alpha",
        "0.25",
        "--energy",
        "4",
        "--e-bound-n",
        "1",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10);
    let resonant = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!(
        (resonant[2] - std::f64::consts::FRAC_PI_2).abs() < 1e-9,
        "correction at l=0: {}",
        resonant[2]
    );
    // unmodified channels carry no correction
    for row in rows.iter().filter(|r| r[0] != 0.0 && r[0] != -1.0) {
        assert_eq!(row[2], 0.0);
    }
}

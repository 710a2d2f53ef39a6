//! End-to-end tests of the `phrmt` binary: CSV contract, exit codes,
//! determinism, and the figure presets.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phrmt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phrmt"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn parse_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).expect("csv readable");
    let mut comments = Vec::new();
    let mut rows = Vec::new();
    let mut header_seen = false;
    for line in text.lines() {
        if line.starts_with('#') {
            assert!(!header_seen, "comments precede the header");
            comments.push(line.to_string());
        } else if !header_seen {
            assert_eq!(line, "t,delta,lambda1,lambda2,entropy");
            header_seen = true;
        } else {
            let row: Vec<f64> = line.split(',').map(|v| v.parse().expect("float cell")).collect();
            assert_eq!(row.len(), 5);
            rows.push(row);
        }
    }
    assert!(header_seen, "header present");
    (comments, rows)
}

#[test]
fn trace_mode_writes_the_documented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(
        &[
            "run",
            "--n", "6",
            "--m", "2",
            "--seed", "3",
            "--t-steps", "101",
            "--out", "trace.csv",
            "--deterministic",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let (comments, rows) = parse_csv(&dir.path().join("trace.csv"));
    assert_eq!(rows.len(), 101);
    assert!(comments.iter().any(|c| c.starts_with("# seed = 3")));
    assert!(comments.iter().any(|c| c.starts_with("# x = ")));
    assert!(comments.iter().any(|c| c == "# log-base = e"));
    assert!(comments.iter().all(|c| !c.starts_with("# generated-at")));

    // θ defaults to π/2: the trace starts pure.
    assert_eq!(rows[0][0], 0.0);
    assert!(rows[0][4].abs() < 1e-9);
    // Entropy column stays within [0, ln 2].
    for row in &rows {
        assert!(row[4] >= 0.0 && row[4] <= std::f64::consts::LN_2 + 1e-12);
        assert!((row[2] + row[3] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn single_point_grid_emits_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(
        &["run", "--t-steps", "1", "--t-start", "2.5", "--t-end", "2.5", "--out", "one.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let (_, rows) = parse_csv(&dir.path().join("one.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 2.5);
}

#[test]
fn deterministic_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = phrmt(
            &["run", "--seed", "9", "--t-steps", "51", "--out", name, "--deterministic"],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn figure_two_saturates_and_writes_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(
        &["figure", "--id", "2", "--seed", "1", "--out", "fig2", "--deterministic"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    for seed in [1u64, 2] {
        let path = dir.path().join(format!("fig2-seed{seed}.csv"));
        let (comments, rows) = parse_csv(&path);
        assert_eq!(rows.len(), 2001);
        assert!(comments.iter().any(|c| c.starts_with(&format!("# seed = {seed}"))));
        assert!(comments.iter().any(|c| c.starts_with("# regime = broken")));

        // Rises from zero, peaks, then flattens: final 10% nearly constant.
        assert!(rows[0][4] < 1e-9);
        let max_entropy = rows.iter().map(|r| r[4]).fold(0.0f64, f64::max);
        assert!(max_entropy > 0.69);
        let tail: Vec<f64> = rows.iter().skip(1800).map(|r| r[4]).collect();
        let (lo, hi) = tail
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        assert!(hi - lo < 1e-3, "tail range {}", hi - lo);
        let final_entropy = *tail.last().unwrap();
        assert!(final_entropy > 0.01 && final_entropy < 0.69);
    }
}

#[test]
fn figure_one_oscillates() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(
        &["figure", "--id", "1", "--seed", "1", "--out", "fig1", "--deterministic"],
        dir.path(),
    );
    assert!(out.status.success());
    let (comments, rows) = parse_csv(&dir.path().join("fig1-seed1.csv"));
    assert!(comments.iter().any(|c| c.starts_with("# regime = unbroken")));
    assert!(rows[0][4] < 1e-9);
    let max_entropy = rows.iter().map(|r| r[4]).fold(0.0f64, f64::max);
    assert!(max_entropy > 0.69);
    // Falls back down after the first peak: oscillation, not saturation.
    let peak_idx = rows
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a[4].partial_cmp(&b[4]).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let min_after = rows.iter().skip(peak_idx).map(|r| r[4]).fold(f64::MAX, f64::min);
    assert!(min_after < 0.05, "entropy should return near zero, got {min_after}");
}

#[test]
fn verify_mode_passes_and_prints_check_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(&["verify", "--n", "6", "--m", "2", "--seed", "7"], dir.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS casimir-identity"));
    assert!(stdout.contains("PASS dyson-removes-non-hermitian-terms"));
    assert!(stdout.contains("FINDING second-ansatz-closed-form-reuse"));
    assert!(stdout.contains("result: PASS"));
    assert!(!stdout.contains("FAIL "));
}

#[test]
fn config_file_sets_values_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("exp.conf"),
        "# experiment configuration\nseed = 5\nt-steps = 11\nb = 1.3\nout = from-file.csv\n",
    )
    .unwrap();
    let out = phrmt(
        &["run", "--config", "exp.conf", "--t-steps", "21", "--deterministic"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let (comments, rows) = parse_csv(&dir.path().join("from-file.csv"));
    assert_eq!(rows.len(), 21, "flag overrides the file");
    assert!(comments.iter().any(|c| c.starts_with("# seed = 5")));
    assert!(comments.iter().any(|c| c.starts_with("# b = 1.3")));
}

#[test]
fn single_state_mode_reports_weights() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(
        &["single-state", "--t-steps", "51", "--out", "ss.csv", "--deterministic"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("ss.csv")).unwrap();
    assert!(text.contains("t,gamma,weight_x,weight_y"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 51);
    for row in &rows {
        assert!((row[2] + row[3] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn usage_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    // Dimension violation detected by validation.
    let out = phrmt(&["run", "--n", "3", "--m", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("n >= 2m"), "message names the field: {msg}");

    // Bad figure id.
    let out = phrmt(&["figure", "--id", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Bad mode index.
    let out = phrmt(&["run", "--m-index", "5"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Unknown flag (clap's own usage error).
    let out = phrmt(&["run", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = phrmt(
        &["run", "--t-steps", "2", "--out", "missing-dir/trace.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

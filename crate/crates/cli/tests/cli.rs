use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use tempfile::TempDir;

const HBAR: f64 = 1.054_571_817e-34;

fn fho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", dir.to_str().unwrap()]);
    fho(&full)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn digest(path: &Path) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

#[test]
fn zero_drive_rows_repeat_the_first() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["simulate", "--alpha", "0", "--t-end", "2", "--n-states", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("series.csv"));
    assert_eq!(header, ["t", "P0", "P1", "P2", "P3", "P4", "S", "E", "norm"]);
    let first = &rows[0];
    for row in &rows {
        for c in 1..row.len() {
            assert!((row[c] - first[c]).abs() <= 1e-12 * first[c].abs().max(1e-300), "{row:?}");
        }
    }
}

#[test]
fn preset_run_starts_in_ground_state() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &["simulate", "--preset", "paper-resonant", "--scheme", "K", "--t-end", "0.02"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("series.csv"));
    assert_eq!(header.len(), 12 + 4);
    let first = &rows[0];
    let w0 = 2.0 * std::f64::consts::PI * 1e9;
    assert_eq!(first[1], 1.0);
    assert_eq!(first[13], 0.0);
    assert!((first[14] - 0.5 * HBAR * w0).abs() <= 1e-15 * first[14]);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["config"]["preset"], "paper-resonant");
    assert_eq!(manifest["config"]["dt"], "auto");
    assert!(manifest["diagnostics"]["max_norm_drift"].as_f64().unwrap() < 1e-6);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["simulate", "--alpha", "3e-15", "--t-end", "1", "--scheme", "H"];
    assert_eq!(code(&run_in(a.path(), &args)), 0);
    assert_eq!(code(&run_in(b.path(), &args)), 0);
    assert_eq!(digest(&a.path().join("series.csv")), digest(&b.path().join("series.csv")));

    let c = TempDir::new().unwrap();
    let manifest = a.path().join("manifest.json");
    let o = run_in(c.path(), &["simulate", "--config", manifest.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(digest(&a.path().join("series.csv")), digest(&c.path().join("series.csv")));
}

#[test]
fn toml_config_and_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "alpha = 0.0\nn_states = 4\nt_end = 0.5\nscheme = \"H\"\n").unwrap();
    let o = run_in(dir.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--n-states", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, _) = read_csv(&dir.path().join("series.csv"));
    assert_eq!(header, ["t", "P0", "P1", "P2", "S", "E", "norm"]);

    std::fs::write(&cfg, "alpah = 1.0\n").unwrap();
    let o = run_in(dir.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("alpah"));
}

#[test]
fn config_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    for (args, key) in [
        (vec!["simulate", "--n-states", "1"], "n_states"),
        (vec!["simulate", "--scheme", "X"], "scheme"),
        (vec!["simulate", "--case", "nonresonant", "--omega", "6.283185307179586e9", "--omega0", "6.283185307179586e9"], "case"),
        (vec!["sweep", "--alphas", "-1"], "alphas"),
    ] {
        let o = run_in(dir.path(), &args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(stderr(&o).contains(key), "{}", stderr(&o));
    }
    assert_eq!(code(&fho(&["simulate", "--no-such-flag"])), 1);
    assert_eq!(code(&fho(&["--help"])), 0);
}

#[test]
fn norm_drift_exits_2_with_diagnostic() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["simulate", "--preset", "paper-resonant", "--dt", "1e-3"]);
    assert_eq!(code(&o), 2);
    let msg = stderr(&o);
    assert!(msg.contains("norm drift") && msg.contains("--dt auto"), "{msg}");
}

#[test]
fn sweep_rows_sorted_and_failures_marked() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let common = ["--t-end", "0.5", "--dt", "auto", "--jobs", "2"];
    let mut args = vec!["sweep", "--alphas", "2e-15,0,1e-15"];
    args.extend(common);
    assert_eq!(code(&run_in(a.path(), &args)), 0);
    let mut permuted = vec!["sweep", "--alphas", "0,1e-15,2e-15"];
    permuted.extend(common);
    assert_eq!(code(&run_in(b.path(), &permuted)), 0);
    assert_eq!(digest(&a.path().join("sweep.csv")), digest(&b.path().join("sweep.csv")));

    let (header, rows) = read_csv(&a.path().join("sweep.csv"));
    assert_eq!(header, ["alpha", "S_bar_K", "S_bar_H", "E_bar_K", "E_bar_H"]);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!((rows[0][1], rows[0][2]), (0.0, 0.0));
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));

    let c = TempDir::new().unwrap();
    let o = run_in(c.path(), &["sweep", "--alphas", "0,1e-13", "--t-end", "1", "--dt", "1e-3"]);
    assert_eq!(code(&o), 2);
    let text = std::fs::read_to_string(c.path().join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "alpha,S_bar_K,S_bar_H,E_bar_K,E_bar_H,error");
    assert!(lines.next().unwrap().ends_with(','));
    assert!(lines.next().unwrap().contains("norm drift"));
}

#[test]
fn validate_passes_and_writes_report() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["validate", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("validation.json")).unwrap())
            .unwrap();
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 8);
    assert!(suites.iter().all(|s| s["passed"] == true));
}

#[test]
fn classical_columns() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["classical", "--alpha", "0", "--x0", "1e-3", "--v0", "5", "--t-end", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("classical.csv"));
    assert_eq!(header, ["t", "x", "v", "K", "W"]);
    let k0 = rows[0][3];
    for r in &rows {
        assert!((r[3] - k0).abs() <= 1e-12 * k0);
        assert_eq!(r[4], 0.0);
    }

    let m = 1.6726219e-27;
    let w0 = 2.0 * std::f64::consts::PI * 1e9;
    for case in ["resonant", "nonresonant"] {
        let d = TempDir::new().unwrap();
        let o = run_in(d.path(), &["classical", "--case", case, "--x0", "2e-3", "--t-end", "4"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let (_, rows) = read_csv(&d.path().join("classical.csv"));
        for r in &rows {
            let k_free = 0.5 * m * (r[2] * r[2] + w0 * w0 * r[1] * r[1]);
            let scale = r[3].abs().max(k_free.abs());
            assert!((r[4] - (r[3] - k_free)).abs() <= 1e-12 * scale, "{case} {r:?}");
        }
    }
}

#[test]
fn resonant_classical_amplitude_grows_linearly() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["classical", "--case", "resonant", "--t-end", "40", "--stride", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (_, rows) = read_csv(&dir.path().join("classical.csv"));
    let per_period = (rows.len() - 1) / 40;
    let peak = |p: usize| {
        rows[p * per_period..(p + 1) * per_period]
            .iter()
            .map(|r| r[1].abs())
            .fold(0.0, f64::max)
    };
    let (p10, p20, p39) = (peak(10), peak(20), peak(39));
    assert!(p10 < p20 && p20 < p39);
    let slope1 = (p20 - p10) / 10.0;
    let slope2 = (p39 - p20) / 19.0;
    assert!((slope1 - slope2).abs() < 0.02 * slope1, "{slope1} {slope2}");
}

//! End-to-end behavior of the `frontspread` binary: diagnostics, artifact
//! layout, replay determinism, certification, sweeping, and plotting.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frontspread"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.txt");
    std::fs::write(&path, text).unwrap();
    path
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

const ACCEL_CONFIG: &str = "\
model.r = 1.0
model.beta = 1.5
profile.kind = algebraic
profile.alpha = 1.0
profile.x0 = 2.0
solver.dx = 0.1
solver.t_end = 8
solver.snapshot_dt = 1
solver.levels = 0.3, 0.5
";

#[test]
fn syntax_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "model.r = 1.0\noops no equals sign\n");
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn shallow_degeneracy_is_diagnosed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 0.5\nprofile.kind = algebraic\nprofile.alpha = 1.0\n",
    );
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("beta must exceed 1"), "{err}");
}

#[test]
fn unknown_keys_are_rejected_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 1.5\nprofile.kind = algebraic\nprofile.alpha = 1.0\nsolvr.dx = 0.1\n",
    );
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("solvr.dx") && err.contains("line 5"), "{err}");
}

#[test]
fn zero_horizon_run_writes_initial_artifacts_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 1.5\nprofile.kind = algebraic\nprofile.alpha = 1.0\nsolver.t_end = 0\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ["run.json", "levelsets.csv", "snapshots.bin"] {
        assert!(out_dir.join(name).is_file(), "missing {name}");
    }
    let csv = std::fs::read_to_string(out_dir.join("levelsets.csv")).unwrap();
    // Header plus the two default levels sampled once, at t = 0.
    assert_eq!(csv.lines().count(), 3, "{csv}");
    assert!(csv.starts_with("lambda,t,x_left,x_right\n"));
}

#[test]
fn replaying_the_echoed_run_json_reproduces_csv_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), ACCEL_CONFIG);
    let out1 = dir.path().join("first");
    let out2 = dir.path().join("replayed");

    let run1 = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out1)
        .output()
        .unwrap();
    assert_eq!(run1.status.code(), Some(0), "{}", stderr(&run1));

    let run2 = bin()
        .args(["simulate", "--config"])
        .arg(out1.join("run.json"))
        .arg("--out")
        .arg(&out2)
        .output()
        .unwrap();
    assert_eq!(run2.status.code(), Some(0), "{}", stderr(&run2));

    let csv1 = std::fs::read(out1.join("levelsets.csv")).unwrap();
    let csv2 = std::fs::read(out2.join("levelsets.csv")).unwrap();
    assert_eq!(csv1, csv2, "levelsets.csv changed under replay");
    let bin1 = std::fs::read(out1.join("snapshots.bin")).unwrap();
    let bin2 = std::fs::read(out2.join("snapshots.bin")).unwrap();
    assert_eq!(bin1, bin2, "snapshots.bin changed under replay");
}

#[test]
fn snapshots_csv_is_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 1.5\nprofile.kind = algebraic\nprofile.alpha = 1.0\nsolver.t_end = 1\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["simulate", "--snapshots-csv", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("snapshots.csv")).unwrap();
    assert!(csv.starts_with("t,x,u\n"));
    assert!(csv.lines().count() > 100);
}

#[test]
fn plot_renders_trajectories_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), ACCEL_CONFIG);
    let out_dir = dir.path().join("out");
    let sim = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(sim.status.code(), Some(0), "{}", stderr(&sim));

    let plot = bin().args(["plot", "--out"]).arg(&out_dir).output().unwrap();
    assert_eq!(plot.status.code(), Some(0), "{}", stderr(&plot));
    let svg = std::fs::read_to_string(out_dir.join("trajectories.svg")).unwrap();
    assert!(svg.starts_with("<svg"), "not an svg: {}", &svg[..40.min(svg.len())]);
    assert!(svg.contains("lambda = 0.3"));
    // The accelerating run carries envelope parameters, so both envelope
    // curves are overlaid.
    assert!(svg.contains("lower envelope"), "envelope overlay missing");
}

#[test]
fn plot_without_artifacts_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["plot", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no plottable artifacts"), "{}", stderr(&out));
}

#[test]
fn certify_accelerating_configuration_passes_all_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 1.5\nprofile.kind = algebraic\nprofile.alpha = 1.0\n\
         solver.dx = 0.1\nsolver.t_end = 10\nsolver.snapshot_dt = 1\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["certify", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}\n{}", stdout(&out), stderr(&out));
    let text = std::fs::read_to_string(out_dir.join("certificates.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
    let ids: Vec<&str> = json["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["bump_subsolution", "global_supersolution"]);
    assert!(json["ordering"]["pass"].as_bool().unwrap());
}

#[test]
fn certify_bounded_speed_configuration_scans_the_traveling_frame() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 2.0\nprofile.kind = algebraic\nprofile.alpha = 2.0\n\
         solver.t_end = 0\ncertify.traveling_points = 2000\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["certify", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(out_dir.join("certificates.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
    assert_eq!(
        json["reports"][0]["id"].as_str().unwrap(),
        "traveling_supersolution"
    );
}

#[test]
fn two_cell_sweep_writes_phase_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nprofile.kind = algebraic\nsolver.dx = 0.1\nsolver.t_end = 60\n\
         solver.snapshot_dt = 2\nsweep.lambda = 0.5\nsweep.cells = 1.0:1.5, 2.0:3.0\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["sweep", "--jobs", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("phase agreement"), "{}", stdout(&out));

    let csv = std::fs::read_to_string(out_dir.join("phase_diagram.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3, "{csv}");
    assert!(csv.starts_with("alpha,beta,theory_regime,"));
    assert!(out_dir.join("summary.json").is_file());
    let mut cell_dirs: Vec<_> = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| e.file_name().into_string().unwrap())
        .collect();
    cell_dirs.sort();
    assert_eq!(cell_dirs.len(), 2, "{cell_dirs:?}");
    assert!(out_dir.join(&cell_dirs[0]).join("run.json").is_file());
    assert!(out_dir.join(&cell_dirs[0]).join("levelsets.csv").is_file());

    let plot = bin().args(["plot", "--out"]).arg(&out_dir).output().unwrap();
    assert_eq!(plot.status.code(), Some(0), "{}", stderr(&plot));
    let svg = std::fs::read_to_string(out_dir.join("phase.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn seedless_flag_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model.r = 1.0\nmodel.beta = 1.5\nprofile.kind = algebraic\nprofile.alpha = 1.0\nsolver.t_end = 0\n",
    );
    let out = bin()
        .args(["simulate", "--seedless", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

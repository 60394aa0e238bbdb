//! Phase-diagram acceptance gate: a 4x4 Cartesian grid of (alpha, beta)
//! cells, every cell at distance >= 0.2 from the critical hyperbola
//! `beta = 1 + 1/alpha`, swept with four concurrent jobs.  The sharp
//! dichotomy must agree with the measured kinematics in at least 90% of
//! cells.

use std::process::Command;
use std::time::Instant;

fn verdict(number: u32, name: &str, pass: bool) -> bool {
    println!(
        "ACCEPTANCE {number} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn acceptance_7_phase_diagram() {
    let started = Instant::now();
    let alphas: [f64; 4] = [0.8, 1.0, 3.0, 4.5];
    let betas: [f64; 4] = [1.6, 1.65, 2.6, 3.6];
    let mut cells = Vec::new();
    for &alpha in &alphas {
        for &beta in &betas {
            let distance: f64 = (beta - (1.0 + 1.0 / alpha)).abs();
            assert!(
                distance >= 0.2,
                "grid design error: cell {alpha}:{beta} sits {distance:.3} from the hyperbola"
            );
            cells.push(format!("{alpha}:{beta}"));
        }
    }
    assert_eq!(cells.len(), 16);

    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "model.r = 1.0\nprofile.kind = algebraic\nprofile.c = 1.0\nprofile.x0 = 2.0\n\
         solver.dx = 0.1\nsolver.t_end = 120\nsolver.snapshot_dt = 2\n\
         solver.max_nodes = 4000000\n\
         sweep.lambda = 0.5\nsweep.cells = {}\n",
        cells.join(", ")
    );
    let cfg_path = dir.path().join("sweep.txt");
    std::fs::write(&cfg_path, config).unwrap();
    let out_dir = dir.path().join("phase");

    let output = Command::new(env!("CARGO_BIN_EXE_frontspread"))
        .args(["sweep", "--jobs", "4", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    let stderr = String::from_utf8_lossy(&output.stderr);
    println!("{stdout}");
    if !stderr.is_empty() {
        println!("stderr: {stderr}");
    }
    assert_eq!(output.status.code(), Some(0), "sweep failed: {stderr}");

    let csv = std::fs::read_to_string(out_dir.join("phase_diagram.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 16, "expected one row per cell:\n{csv}");
    let mut agreements = 0;
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 7, "malformed row {row}");
        println!(
            "cell alpha={:>7} beta={:>7}: theory {:<16} measured {:<13} q={} agree={}",
            format!("{:.2}", fields[0].parse::<f64>().unwrap()),
            format!("{:.2}", fields[1].parse::<f64>().unwrap()),
            fields[2],
            fields[3],
            if fields[4].is_empty() {
                "-".to_string()
            } else {
                format!("{:.3}", fields[4].parse::<f64>().unwrap())
            },
            fields[6]
        );
        if fields[6] == "true" {
            agreements += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "phase diagram: {agreements}/16 agreement in {elapsed:.0} s (budget 1800 s, 4 jobs)"
    );

    let pass = agreements * 10 >= 16 * 9 && elapsed <= 1800.0;
    assert!(
        verdict(7, "phase_diagram", pass),
        "agreement {agreements}/16, elapsed {elapsed:.0} s"
    );
}

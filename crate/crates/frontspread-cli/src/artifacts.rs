//! Artifact files of a run: `run.json`, `levelsets.csv`, `snapshots.bin`
//! (optionally `snapshots.csv`), `certificates.json`, `phase_diagram.csv`,
//! `summary.json`.
//!
//! All CSV numbers are written with 17 significant digits so replayed runs
//! can be compared byte for byte.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use frontspread::levelsets;
use frontspread::solver::RunResult;

use crate::experiment::RunReport;
use crate::sweep::CellRow;

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file =
        File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, value)
        .with_context(|| format!("serializing {}", path.display()))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(path)
}

pub fn write_run_json(dir: &Path, report: &RunReport) -> Result<PathBuf> {
    write_json(dir, "run.json", report)
}

/// The certificate suite alone, for consumers that do not want the full run
/// report.  `pass` mirrors the report's overall verdict.
pub fn write_certificates_json(dir: &Path, report: &RunReport) -> Result<PathBuf> {
    #[derive(Serialize)]
    struct CertificateFile<'a> {
        pass: bool,
        reports: &'a [frontspread::certificates::ResidualReport],
        ordering: &'a Option<frontspread::certificates::OrderingReport>,
        bump: &'a Option<frontspread::theory::BumpConstants>,
        global: &'a Option<frontspread::certificates::GlobalParams>,
    }
    write_json(
        dir,
        "certificates.json",
        &CertificateFile {
            pass: report.checks_passed,
            reports: &report.certificates,
            ordering: &report.ordering,
            bump: &report.bump,
            global: &report.global,
        },
    )
}

pub fn write_levelsets_csv(dir: &Path, result: &RunResult) -> Result<PathBuf> {
    let path = dir.join("levelsets.csv");
    let mut out = create(&path)?;
    levelsets::write_csv(&mut out, &result.trajectories)
        .with_context(|| format!("writing {}", path.display()))?;
    out.flush()?;
    Ok(path)
}

/// Binary snapshot dump.  Little-endian records, one per snapshot:
///
/// ```text
/// u64 node_count | f64 t | f64 x_left | f64 dx | node_count x f64 values
/// ```
pub fn write_snapshots_bin(dir: &Path, result: &RunResult) -> Result<PathBuf> {
    let path = dir.join("snapshots.bin");
    let mut out = create(&path)?;
    for snap in &result.snapshots {
        out.write_all(&(snap.values.len() as u64).to_le_bytes())?;
        out.write_all(&snap.t.to_le_bytes())?;
        out.write_all(&snap.x_left.to_le_bytes())?;
        out.write_all(&snap.dx.to_le_bytes())?;
        for &v in &snap.values {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(path)
}

/// Long-form CSV alternative to the binary dump; one row per node per
/// snapshot, so only written on request.
pub fn write_snapshots_csv(dir: &Path, result: &RunResult) -> Result<PathBuf> {
    let path = dir.join("snapshots.csv");
    let mut out = create(&path)?;
    writeln!(out, "t,x,u")?;
    for snap in &result.snapshots {
        for (i, &v) in snap.values.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", snap.t, snap.x(i), v)?;
        }
    }
    out.flush()?;
    Ok(path)
}

pub fn write_phase_csv(dir: &Path, rows: &[CellRow]) -> Result<PathBuf> {
    let path = dir.join("phase_diagram.csv");
    let mut out = create(&path)?;
    writeln!(
        out,
        "alpha,beta,theory_regime,empirical_regime,fitted_exponent,fit_quality,agree"
    )?;
    for row in rows {
        let exponent = row
            .fitted_exponent
            .map(|q| format!("{q:.16e}"))
            .unwrap_or_default();
        let quality = row
            .fit_quality
            .map(|r2| format!("{r2:.16e}"))
            .unwrap_or_default();
        writeln!(
            out,
            "{:.16e},{:.16e},{},{},{},{},{}",
            row.alpha, row.beta, row.theory_regime, row.empirical_regime, exponent, quality,
            row.agree
        )?;
    }
    out.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use frontspread::solver::Snapshot;

    #[test]
    fn snapshot_binary_layout_roundtrips() {
        let result = RunResult {
            snapshots: vec![Snapshot {
                t: 1.5,
                x_left: -3.0,
                dx: 0.5,
                values: vec![1.0, 0.25],
            }],
            trajectories: Vec::new(),
            gamma_hat: None,
            expansion_times: Vec::new(),
        };
        let dir = std::env::temp_dir().join("frontspread-artifact-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = write_snapshots_bin(&dir, &result).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 8 * 4 + 2 * 8);
        assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 2);
        assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1.5);
        assert_eq!(f64::from_le_bytes(bytes[32..40].try_into().unwrap()), 1.0);
        std::fs::remove_dir_all(&dir).ok();
    }
}

//! Phase-diagram sweep over `(alpha, beta)` cells.
//!
//! Each cell integrates the algebraic-tail problem with its own exponents,
//! classifies the tracked level empirically over its final decade, and is
//! compared against the sharp dichotomy `beta >= 1 + 1/alpha`.  Cells run
//! concurrently (capped by `--jobs`), each writing its own artifact
//! subdirectory; per-cell failures are recorded and the sweep continues.

use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use frontspread::levelsets::{detect_regime_empirical, EmpiricalRegime, RegimeThresholds};
use frontspread::model::{InitialProfile, NonlinearityModel};
use frontspread::solver::{run, SolverConfig};
use frontspread::theory::{classify_regime, SpreadingRegime};

use crate::artifacts;
use crate::config::Config;
use crate::experiment::solver_from_config;

/// Smallest admissible distance of a cell to the critical hyperbola
/// `beta = 1 + 1/alpha`; cells inside the band have no clean prediction to
/// compare against and are rejected up front.
const HYPERBOLA_BAND: f64 = 0.2;

/// One row of `phase_diagram.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct CellRow {
    pub alpha: f64,
    pub beta: f64,
    /// `no_acceleration` or `acceleration`.
    pub theory_regime: String,
    /// `linear`, `accelerating`, `indeterminate`, or `error`.
    pub empirical_regime: String,
    /// Power-law exponent of the final-decade fit.
    pub fitted_exponent: Option<f64>,
    /// Goodness of the fit backing the empirical verdict.
    pub fit_quality: Option<f64>,
    /// Theory and measurement name the same regime.
    pub agree: bool,
    /// What went wrong, for cells that failed.
    pub error: Option<String>,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    cells: usize,
    agreements: usize,
    agreement_rate: Option<f64>,
    lambda: f64,
    rows: &'a [CellRow],
}

#[derive(Serialize)]
struct CellReport<'a> {
    row: &'a CellRow,
    gamma_hat: Option<f64>,
    expansion_times: Vec<f64>,
}

struct SweepBase {
    r: f64,
    delta: f64,
    s0: Option<f64>,
    r_bar: Option<f64>,
    c: f64,
    c_bar: f64,
    x0: f64,
    eta: f64,
    solver: SolverConfig,
    lambda: f64,
}

fn base_from_config(cfg: &Config) -> Result<SweepBase> {
    let lambda = cfg.f64_opt("sweep.lambda")?.unwrap_or(0.5);
    let kind = cfg
        .str_opt("profile.kind")
        .unwrap_or_else(|| "algebraic".into());
    if kind != "algebraic" {
        bail!(
            "config line {}: phase sweeps need profile.kind = algebraic \
             (the dichotomy is stated for algebraic tails), got `{kind}`",
            cfg.line("profile.kind")
        );
    }
    let c = cfg.f64_opt("profile.c")?.unwrap_or(1.0);
    Ok(SweepBase {
        r: cfg.f64_opt("model.r")?.unwrap_or(1.0),
        delta: cfg.f64_opt("model.delta")?.unwrap_or(1.0),
        s0: cfg.f64_opt("model.s0")?,
        r_bar: cfg.f64_opt("model.r_bar")?,
        c,
        c_bar: cfg.f64_opt("profile.c_bar")?.unwrap_or(c),
        x0: cfg.f64_opt("profile.x0")?.unwrap_or(2.0),
        eta: cfg.f64_opt("profile.eta")?.unwrap_or(1.0),
        solver: solver_from_config(cfg, false, vec![lambda])?,
        lambda,
    })
}

fn regime_name(regime: SpreadingRegime) -> &'static str {
    match regime {
        SpreadingRegime::NoAcceleration => "no_acceleration",
        SpreadingRegime::Acceleration => "acceleration",
    }
}

fn empirical_name(regime: EmpiricalRegime) -> &'static str {
    match regime {
        EmpiricalRegime::Linear => "linear",
        EmpiricalRegime::Accelerating => "accelerating",
        EmpiricalRegime::Indeterminate => "indeterminate",
    }
}

/// Integrates one cell and classifies it.  All failures are folded into the
/// returned row rather than propagated.
fn run_cell(base: &SweepBase, alpha: f64, beta: f64, dir: &Path) -> CellRow {
    let verdict = match classify_regime(alpha, beta) {
        Ok(v) => v,
        Err(e) => {
            return CellRow {
                alpha,
                beta,
                theory_regime: "error".into(),
                empirical_regime: "error".into(),
                fitted_exponent: None,
                fit_quality: None,
                agree: false,
                error: Some(e.to_string()),
            }
        }
    };
    let theory_regime = regime_name(verdict.regime).to_string();
    let mut row = CellRow {
        alpha,
        beta,
        theory_regime,
        empirical_regime: "error".into(),
        fitted_exponent: None,
        fit_quality: None,
        agree: false,
        error: None,
    };

    let attempt = (|| -> Result<()> {
        let model = match (base.s0, base.r_bar) {
            (None, None) => NonlinearityModel::canonical(base.r, beta, base.delta),
            (s0, r_bar) => NonlinearityModel::canonical_with_bounds(
                base.r,
                beta,
                base.delta,
                s0.unwrap_or(0.5),
                r_bar.unwrap_or(base.r),
            ),
        }?;
        let profile = InitialProfile::algebraic(base.c, base.c_bar, alpha, base.x0, base.eta)?;
        let result = run(&model, &profile, &base.solver)?;
        let (regime, fit) =
            detect_regime_empirical(&result.trajectories[0], &RegimeThresholds::default())?;
        row.empirical_regime = empirical_name(regime).to_string();
        row.fitted_exponent = Some(fit.q);
        row.fit_quality = Some(match regime {
            EmpiricalRegime::Linear => fit.r2_linear,
            _ => fit.r2_loglog,
        });
        row.agree = matches!(
            (verdict.regime, regime),
            (SpreadingRegime::NoAcceleration, EmpiricalRegime::Linear)
                | (SpreadingRegime::Acceleration, EmpiricalRegime::Accelerating)
        );

        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        artifacts::write_json(
            dir,
            "run.json",
            &CellReport {
                row: &row,
                gamma_hat: result.gamma_hat,
                expansion_times: result.expansion_times.clone(),
            },
        )?;
        artifacts::write_levelsets_csv(dir, &result)?;
        Ok(())
    })();
    if let Err(e) = attempt {
        row.empirical_regime = "error".into();
        row.fitted_exponent = None;
        row.fit_quality = None;
        row.agree = false;
        row.error = Some(format!("{e:#}"));
    }
    row
}

/// Runs the sweep described by `cfg`, writing `phase_diagram.csv` and
/// `summary.json` under `out` and one subdirectory per cell.  Returns true
/// unless the sweep itself (not an individual cell) failed to run.
pub fn run_sweep(cfg: &Config, out: &Path, jobs: Option<usize>) -> Result<bool> {
    let cells = cfg.pair_list_req("sweep.cells")?;
    let base = base_from_config(cfg)?;
    cfg.ensure_fully_consumed()?;

    for &(alpha, beta) in &cells {
        if !(alpha.is_finite() && alpha > 0.0) {
            bail!("sweep cell {alpha}:{beta}: alpha must be positive");
        }
        if !(beta > 1.0) {
            bail!("sweep cell {alpha}:{beta}: beta must exceed 1");
        }
        let distance = (beta - (1.0 + 1.0 / alpha)).abs();
        if distance < HYPERBOLA_BAND {
            bail!(
                "sweep cell {alpha}:{beta} sits {distance:.3} from the critical hyperbola \
                 beta = 1 + 1/alpha; cells closer than {HYPERBOLA_BAND} have no clean \
                 prediction and are excluded"
            );
        }
    }

    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .context("building sweep thread pool")?;
    let rows: Vec<CellRow> = pool.install(|| {
        cells
            .par_iter()
            .enumerate()
            .map(|(idx, &(alpha, beta))| {
                let dir = out.join(format!("cell_{idx:02}_a{alpha}_b{beta}"));
                run_cell(&base, alpha, beta, &dir)
            })
            .collect()
    });

    let agreements = rows.iter().filter(|r| r.agree).count();
    artifacts::write_phase_csv(out, &rows)?;
    artifacts::write_json(
        out,
        "summary.json",
        &SweepSummary {
            cells: rows.len(),
            agreements,
            agreement_rate: (!rows.is_empty()).then(|| agreements as f64 / rows.len() as f64),
            lambda: base.lambda,
            rows: &rows,
        },
    )?;
    let pct = if rows.is_empty() {
        100.0
    } else {
        100.0 * agreements as f64 / rows.len() as f64
    };
    println!("phase agreement {agreements}/{} ({pct:.1}%)", rows.len());
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "cell {}:{} failed: {}",
            row.alpha,
            row.beta,
            row.error.as_deref().unwrap_or("")
        );
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_hyperbola_cells_are_rejected() {
        let cfg = Config::parse("sweep.cells = 1.0:2.1\n").unwrap();
        let dir = std::env::temp_dir().join("frontspread-sweep-reject");
        let err = run_sweep(&cfg, &dir, Some(1)).unwrap_err();
        assert!(err.to_string().contains("critical hyperbola"), "{err}");
    }

    #[test]
    fn empty_grid_writes_header_only_csv() {
        let cfg = Config::parse("sweep.cells = none\n").unwrap();
        let dir = std::env::temp_dir().join("frontspread-sweep-empty");
        std::fs::create_dir_all(&dir).unwrap();
        assert!(run_sweep(&cfg, &dir, Some(1)).unwrap());
        let csv = std::fs::read_to_string(dir.join("phase_diagram.csv")).unwrap();
        assert_eq!(
            csv,
            "alpha,beta,theory_regime,empirical_regime,fitted_exponent,fit_quality,agree\n"
        );
        std::fs::remove_dir_all(&dir).ok();
    }
}

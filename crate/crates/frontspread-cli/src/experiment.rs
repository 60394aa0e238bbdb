//! Configuration-driven experiments: build a problem from dotted-key
//! config, integrate it, summarize kinematics and theory verdicts, and
//! (for `certify`) run the comparison-function residual suite.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use frontspread::certificates::{
    check_bump_subsolution, check_global_supersolution, check_ordering,
    check_traveling_supersolution, global_supersolution_params, GlobalParams, OrderingReport,
    ResidualReport, ScanSpec,
};
use frontspread::levelsets::{
    detect_regime_empirical, fit_growth, EmpiricalRegime, KinematicsFit, RegimeThresholds,
};
use frontspread::model::{InitialProfile, NonlinearityModel, TailClass};
use frontspread::solver::{run, ExpansionPolicy, RunResult, SolverConfig};
use frontspread::theory::{
    bump_constants, certified_speed_bound, classify_regime, BumpConstants, EnvelopeParams,
    RegimeVerdict, SpeedBound, SpreadingRegime,
};

use crate::config::Config;

/// Everything read out of a config file, resolved against defaults.
#[derive(Debug)]
pub struct Experiment {
    pub model: NonlinearityModel,
    pub profile: InitialProfile,
    pub solver: SolverConfig,
    /// Envelope margin; also the certificate margin. Defaults to `0.2 r`.
    pub epsilon: f64,
    /// Fit window override; defaults to the final decade-style window
    /// `(t_end / 10, t_end)`.
    pub fit_window: Option<(f64, f64)>,
    /// `(n_t, n_x)` of the space-time residual scans.
    pub scan: (usize, usize),
    /// Point count of the one-dimensional traveling-frame scan.
    pub traveling_points: usize,
}

/// Reads `model.*` keys into a reaction model.  `beta` is the degeneracy
/// exponent of the monostable nonlinearity and must exceed 1.
pub fn model_from_config(cfg: &Config, beta: f64, beta_key: &str) -> Result<NonlinearityModel> {
    let r = cfg.f64_req("model.r")?;
    if !(beta > 1.0) {
        bail!(
            "config line {}: {beta_key} = {beta}: beta must exceed 1 (degenerate monostable reaction)",
            cfg.line(beta_key)
        );
    }
    let delta = cfg.f64_opt("model.delta")?.unwrap_or(1.0);
    let s0 = cfg.f64_opt("model.s0")?;
    let r_bar = cfg.f64_opt("model.r_bar")?;
    let model = if s0.is_some() || r_bar.is_some() {
        NonlinearityModel::canonical_with_bounds(
            r,
            beta,
            delta,
            s0.unwrap_or(0.5),
            r_bar.unwrap_or(r),
        )
    } else {
        NonlinearityModel::canonical(r, beta, delta)
    };
    model.map_err(|e| anyhow!("building reaction model: {e}"))
}

/// Reads `profile.*` keys into an initial profile.  `alpha_override` replaces
/// the `profile.alpha` key (used by sweeps, which supply alpha per cell).
pub fn profile_from_config(cfg: &Config, alpha_override: Option<f64>) -> Result<InitialProfile> {
    let kind = cfg.str_req("profile.kind")?;
    let c = cfg.f64_opt("profile.c")?.unwrap_or(1.0);
    let x0 = cfg.f64_opt("profile.x0")?.unwrap_or(2.0);
    let eta = cfg.f64_opt("profile.eta")?.unwrap_or(1.0);
    let profile = match kind.as_str() {
        "algebraic" => {
            let alpha = match alpha_override {
                Some(a) => a,
                None => cfg.f64_req("profile.alpha")?,
            };
            let c_bar = cfg.f64_opt("profile.c_bar")?.unwrap_or(c);
            InitialProfile::algebraic(c, c_bar, alpha, x0, eta)
        }
        "stretched_exponential" => {
            let a = cfg.f64_req("profile.a")?;
            let b = cfg.f64_req("profile.b")?;
            InitialProfile::stretched_exponential(c, a, b, x0, eta)
        }
        "log_linear" => {
            let a = cfg.f64_req("profile.a")?;
            InitialProfile::log_linear(c, a, x0, eta)
        }
        "log_algebraic" => {
            let b = cfg.f64_req("profile.b")?;
            InitialProfile::log_algebraic(c, b, x0, eta)
        }
        other => bail!(
            "config line {}: profile.kind = `{other}` is not one of \
             algebraic, stretched_exponential, log_linear, log_algebraic",
            cfg.line("profile.kind")
        ),
    };
    profile.map_err(|e| anyhow!("building initial profile: {e}"))
}

/// Reads `solver.*` keys on top of the solver defaults.  When `read_levels`
/// is false the `solver.levels` key is left alone (sweeps force their own
/// level) and the caller supplies `levels` directly.
pub fn solver_from_config(
    cfg: &Config,
    read_levels: bool,
    levels: Vec<f64>,
) -> Result<SolverConfig> {
    let mut solver = SolverConfig::default();
    if let Some(v) = cfg.f64_opt("solver.dx")? {
        solver.dx = v;
    }
    if let Some(v) = cfg.f64_opt("solver.cfl")? {
        solver.cfl = v;
    }
    if let Some(v) = cfg.f64_opt("solver.t_end")? {
        solver.t_end = v;
    }
    if let Some(v) = cfg.f64_opt("solver.snapshot_dt")? {
        solver.snapshot_dt = v;
    }
    if let Some(v) = cfg.f64_opt("solver.margin")? {
        solver.margin = v;
    }
    solver.x_left = cfg.f64_opt("solver.x_left")?;
    if let Some(v) = cfg.usize_opt("solver.max_nodes")? {
        solver.max_nodes = v;
    }
    if let Some(on) = cfg.bool_opt("solver.expansion")? {
        solver.expansion = on.then(ExpansionPolicy::default);
    }
    solver.levels = if read_levels {
        cfg.f64_list_opt("solver.levels")?
            .unwrap_or_else(|| vec![0.1, 0.5])
    } else {
        levels
    };
    Ok(solver)
}

/// Resolves a full single-run experiment from config.
pub fn experiment_from_config(cfg: &Config) -> Result<Experiment> {
    let beta = cfg.f64_req("model.beta")?;
    let model = model_from_config(cfg, beta, "model.beta")?;
    let profile = profile_from_config(cfg, None)?;
    let solver = solver_from_config(cfg, true, Vec::new())?;
    let epsilon = cfg
        .f64_opt("certify.epsilon")?
        .unwrap_or(0.2 * model.r);
    let fit_window = cfg.f64_pair_opt("fit.window")?;
    let scan = match cfg.f64_pair_opt("certify.scan")? {
        Some((nt, nx)) => (nt as usize, nx as usize),
        None => (256, 256),
    };
    let traveling_points = cfg
        .usize_opt("certify.traveling_points")?
        .unwrap_or(10_000);
    cfg.ensure_fully_consumed()?;
    Ok(Experiment {
        model,
        profile,
        solver,
        epsilon,
        fit_window,
        scan,
        traveling_points,
    })
}

/// Closed-form verdicts about the configured problem.
#[derive(Debug, Serialize)]
pub struct TheoryReport {
    /// Asymptotic class of the initial tail.
    pub tail: TailClass,
    /// Sharp dichotomy verdict; absent for non-algebraic tails.
    pub regime: Option<RegimeVerdict>,
    /// Spreading envelopes; present only in the accelerating regime.
    pub envelope: Option<EnvelopeParams>,
    /// Certified speed bound; present only without acceleration.
    pub speed_bound: Option<SpeedBound>,
}

/// Fit of one tracked level over the configured window.
#[derive(Debug, Serialize)]
pub struct LevelFit {
    pub lambda: f64,
    pub fit: Option<KinematicsFit>,
    /// Why the fit is absent, when it is.
    pub fit_error: Option<String>,
}

/// Everything `run.json` records about one experiment.
#[derive(Debug, Serialize)]
pub struct RunReport {
    /// Which subcommand produced the report.
    pub command: String,
    /// Verbatim echo of the config; replaying it reproduces the run
    /// bit-identically.
    pub config: BTreeMap<String, String>,
    pub theory: TheoryReport,
    /// Window fits of every tracked level.
    pub fits: Vec<LevelFit>,
    /// Final-decade classification of the level nearest 0.5.
    pub empirical_regime: Option<EmpiricalRegime>,
    /// The fit behind `empirical_regime`.
    pub decade_fit: Option<KinematicsFit>,
    /// Conservative bulk invasion rate, when the state saturates.
    pub gamma_hat: Option<f64>,
    /// Times the domain grew to keep ahead of the front.
    pub expansion_times: Vec<f64>,
    /// Constants ledger of the accelerating lower construction.
    pub bump: Option<BumpConstants>,
    /// Constants ledger of the transported upper construction.
    pub global: Option<GlobalParams>,
    /// Residual scans requested by `certify`.
    pub certificates: Vec<ResidualReport>,
    /// Snapshot-wise ordering between the integration and the closed forms.
    pub ordering: Option<OrderingReport>,
    /// Every requested check passed (vacuously true for plain simulation).
    pub checks_passed: bool,
}

fn theory_report(exp: &Experiment) -> Result<TheoryReport> {
    let tail = exp
        .profile
        .classify_tail()
        .map_err(|e| anyhow!("classifying tail: {e}"))?;
    let regime = match exp.profile.alpha() {
        Some(alpha) => Some(
            classify_regime(alpha, exp.model.beta)
                .map_err(|e| anyhow!("classifying regime: {e}"))?,
        ),
        None => None,
    };
    let accelerating = match (&tail, &regime) {
        (_, Some(v)) => v.regime == SpreadingRegime::Acceleration,
        (TailClass::HeavierThanAlgebraic, None) => true,
        _ => false,
    };
    let envelope = if regime.as_ref().is_some_and(|v| v.regime == SpreadingRegime::Acceleration) {
        EnvelopeParams::from_problem(&exp.model, &exp.profile, exp.epsilon).ok()
    } else {
        None
    };
    let speed_bound = if accelerating {
        None
    } else {
        certified_speed_bound(&exp.model, &exp.profile).ok()
    };
    Ok(TheoryReport {
        tail,
        regime,
        envelope,
        speed_bound,
    })
}

fn fit_levels(exp: &Experiment, result: &RunResult) -> Vec<LevelFit> {
    let window = exp
        .fit_window
        .unwrap_or((exp.solver.t_end / 10.0, exp.solver.t_end));
    result
        .trajectories
        .iter()
        .map(|traj| match fit_growth(traj, window) {
            Ok(fit) => LevelFit {
                lambda: traj.lambda,
                fit: Some(fit),
                fit_error: None,
            },
            Err(e) => LevelFit {
                lambda: traj.lambda,
                fit: None,
                fit_error: Some(e.to_string()),
            },
        })
        .collect()
}

fn decade_verdict(result: &RunResult) -> (Option<EmpiricalRegime>, Option<KinematicsFit>) {
    let probe = result
        .trajectories
        .iter()
        .min_by(|a, b| {
            let da = (a.lambda - 0.5).abs();
            let db = (b.lambda - 0.5).abs();
            da.partial_cmp(&db).unwrap()
        });
    match probe {
        Some(traj) => match detect_regime_empirical(traj, &RegimeThresholds::default()) {
            Ok((regime, fit)) => (Some(regime), Some(fit)),
            Err(_) => (None, None),
        },
        None => (None, None),
    }
}

/// Integrates the experiment and assembles the report.  No certificates are
/// requested, so `checks_passed` is true whenever the run itself succeeds.
pub fn simulate(exp: &Experiment, raw_config: BTreeMap<String, String>) -> Result<(RunReport, RunResult)> {
    let theory = theory_report(exp)?;
    let result = run(&exp.model, &exp.profile, &exp.solver)
        .map_err(|e| anyhow!("integration failed: {e}"))?;
    let fits = fit_levels(exp, &result);
    let (empirical_regime, decade_fit) = decade_verdict(&result);
    let report = RunReport {
        command: "simulate".into(),
        config: raw_config,
        theory,
        fits,
        empirical_regime,
        decade_fit,
        gamma_hat: result.gamma_hat,
        expansion_times: result.expansion_times.clone(),
        bump: None,
        global: None,
        certificates: Vec::new(),
        ordering: None,
        checks_passed: true,
    };
    Ok((report, result))
}

/// Integrates the experiment and runs every certificate that applies:
///
/// * no acceleration (or a lighter-than-algebraic tail): traveling-frame
///   supersolution residual at the certified speed;
/// * acceleration with an algebraic tail: bump-subsolution residual,
///   transported-supersolution residual, and the snapshot ordering checks.
pub fn certify(exp: &Experiment, raw_config: BTreeMap<String, String>) -> Result<(RunReport, RunResult)> {
    let theory = theory_report(exp)?;
    let result = run(&exp.model, &exp.profile, &exp.solver)
        .map_err(|e| anyhow!("integration failed: {e}"))?;
    let fits = fit_levels(exp, &result);
    let (empirical_regime, decade_fit) = decade_verdict(&result);

    let mut bump = None;
    let mut global = None;
    let mut certificates = Vec::new();
    let mut ordering = None;

    let accelerating = theory
        .regime
        .as_ref()
        .is_some_and(|v| v.regime == SpreadingRegime::Acceleration);
    if accelerating {
        let constants = bump_constants(&exp.model, &exp.profile, exp.epsilon)
            .map_err(|e| anyhow!("bump construction: {e}"))?;
        let mut bump_scan = ScanSpec::for_bump(&constants);
        (bump_scan.n_t, bump_scan.n_x) = exp.scan;
        certificates.push(
            check_bump_subsolution(&exp.model, &exp.profile, &constants, &bump_scan)
                .map_err(|e| anyhow!("bump residual scan: {e}"))?,
        );

        let params = global_supersolution_params(&exp.model, &exp.profile, exp.epsilon)
            .map_err(|e| anyhow!("transported construction: {e}"))?;
        let mut global_scan = ScanSpec::for_global(&params);
        (global_scan.n_t, global_scan.n_x) = exp.scan;
        certificates.push(
            check_global_supersolution(&exp.model, &params, &global_scan)
                .map_err(|e| anyhow!("transported residual scan: {e}"))?,
        );

        ordering = Some(
            check_ordering(&result, &exp.model, &exp.profile, &constants, &params)
                .map_err(|e| anyhow!("ordering check: {e}"))?,
        );
        bump = Some(constants);
        global = Some(params);
    } else if matches!(theory.tail, TailClass::HeavierThanAlgebraic) {
        bail!(
            "no certificate construction applies: the tail is heavier than algebraic \
             (accelerates for every beta > 1) but the comparison constructions need \
             an algebraic tail"
        );
    } else {
        let bound = theory.speed_bound.as_ref().ok_or_else(|| {
            anyhow!("no certified speed bound could be constructed for this configuration")
        })?;
        let z_hi = 1e6_f64.max(10.0 * bound.z0);
        certificates.push(
            check_traveling_supersolution(
                bound.k,
                bound.c,
                &exp.model,
                bound.z0,
                z_hi,
                exp.traveling_points,
            )
            .map_err(|e| anyhow!("traveling residual scan: {e}"))?,
        );
    }

    let checks_passed = certificates.iter().all(|c| c.pass)
        && ordering.as_ref().map_or(true, |o| o.pass);
    let report = RunReport {
        command: "certify".into(),
        config: raw_config,
        theory,
        fits,
        empirical_regime,
        decade_fit,
        gamma_hat: result.gamma_hat,
        expansion_times: result.expansion_times.clone(),
        bump,
        global,
        certificates,
        ordering,
        checks_passed,
    };
    Ok((report, result))
}

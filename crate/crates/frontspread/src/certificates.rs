//! Numerical certification of the comparison objects.
//!
//! The closed-form constructions in [`crate::theory`] come with pointwise
//! differential inequalities.  This module evaluates the corresponding
//! residuals on dense sample grids and turns them into machine-checkable
//! reports:
//!
//! * the traveling profile `min(1, K/z^p)` must satisfy
//!   `R(z) = p(p+1)K/z^{p+2} - c p K/z^{p+1} + f(K/z^p) <= 0` for `z >= z0`,
//! * the bump `v = w - A w^{1+delta}` must satisfy `Lv <= 0` wherever it is
//!   positive and the underlying reaction flow exists,
//! * the transported pure-power profile `psi = min(1, w)` must satisfy
//!   `D = rho w^beta - g w^beta - beta h w^{2beta-1} - f(w) >= 0` below its
//!   saturation level.
//!
//! All reports use one sign convention: the stored residual is the quantity
//! that must stay below the tolerance, so `pass == (worst <= tolerance)`
//! uniformly (for the transported profile this means the report carries `-D`).
//! Finally, [`check_ordering`] confronts the certified objects with actual
//! grid states: subsolution below, supersolution above, and the certified
//! height behind the tracked level trajectory.

use crate::error::{Error, Result};
use crate::model::{InitialProfile, NonlinearityModel};
use crate::solver::RunResult;
use crate::theory::{reaction_profile_value, tail_coefficients, y_theta, BumpConstants};
use serde::Serialize;

/// Tolerance for the closed-form traveling residual.
pub const TRAVELING_TOL: f64 = 1e-12;

/// Tolerance for residuals involving the transported profile.
pub const FLOW_TOL: f64 = 1e-10;

/// Outcome of one residual scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// Which inequality was scanned.
    pub id: String,
    /// Number of sample points actually evaluated (points outside the
    /// domain of the inequality are skipped and not counted).
    pub samples: usize,
    /// Largest residual encountered; the certificate demands it stay at or
    /// below `tolerance`.
    pub worst_residual: f64,
    /// Time coordinate of the worst sample (absent for stationary scans).
    pub worst_t: Option<f64>,
    /// Space coordinate of the worst sample.
    pub worst_x: f64,
    /// Pass threshold.
    pub tolerance: f64,
    /// `worst_residual <= tolerance`.
    pub pass: bool,
}

fn log_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        lo
    } else {
        lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
    }
}

// ---------------------------------------------------------------------------
// traveling supersolution
// ---------------------------------------------------------------------------

pub(crate) fn traveling_residual(
    model: &NonlinearityModel,
    k: f64,
    c: f64,
    p: f64,
    z: f64,
) -> f64 {
    p * (p + 1.0) * k / z.powf(p + 2.0) - c * p * k / z.powf(p + 1.0)
        + model.eval_clamped(k / z.powf(p))
}

/// Scans the traveling residual of `min(1, K/z^p)` moving at speed `c` on
/// `n` log-spaced points of `[z_lo, z_hi]`.  `z_lo` must not undercut the
/// saturation point `z0 = K^{beta-1}`, left of which the profile is the
/// constant 1 and trivially a supersolution.
pub fn check_traveling_supersolution(
    k: f64,
    c: f64,
    model: &NonlinearityModel,
    z_lo: f64,
    z_hi: f64,
    n: usize,
) -> Result<ResidualReport> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("amplitude K = {k} must be positive")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("speed c = {c} must be positive")));
    }
    if model.beta <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "traveling profile requires beta > 1, got {}",
            model.beta
        )));
    }
    let p = 1.0 / (model.beta - 1.0);
    let z0 = k.powf(model.beta - 1.0);
    if z_lo < z0 * (1.0 - 1e-9) {
        return Err(Error::Domain(format!(
            "scan start z_lo = {z_lo} undercuts the saturation point z0 = {z0}"
        )));
    }
    if !(z_hi > z_lo) || n < 2 {
        return Err(Error::InvalidParameter(
            "traveling scan needs z_hi > z_lo and at least two points".into(),
        ));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_z = z_lo;
    for i in 0..n {
        let z = log_point(z_lo, z_hi, i, n);
        let r = traveling_residual(model, k, c, p, z);
        if r > worst {
            worst = r;
            worst_z = z;
        }
    }
    Ok(ResidualReport {
        id: "traveling_supersolution".into(),
        samples: n,
        worst_residual: worst,
        worst_t: None,
        worst_x: worst_z,
        tolerance: TRAVELING_TOL,
        pass: worst <= TRAVELING_TOL,
    })
}

// ---------------------------------------------------------------------------
// scan geometry
// ---------------------------------------------------------------------------

/// Sample layout of a space-time residual scan (log-spaced in both axes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSpec {
    /// Number of time samples.
    pub n_t: usize,
    /// Number of space samples.
    pub n_x: usize,
    /// Scanned time interval.
    pub t_range: (f64, f64),
    /// Scanned space interval.
    pub x_range: (f64, f64),
}

impl ScanSpec {
    /// Default layout for the bump scan: from the tail threshold far out,
    /// over times from well before the first blow-ups to long after.
    pub fn for_bump(constants: &BumpConstants) -> Self {
        Self {
            n_t: 256,
            n_x: 256,
            t_range: (1e-2, 2000.0),
            x_range: (constants.x1, 1e6),
        }
    }

    /// Default layout for the transported-profile scan.
    pub fn for_global(params: &GlobalParams) -> Self {
        Self {
            n_t: 256,
            n_x: 256,
            t_range: (1e-2, 2000.0),
            x_range: (params.x0_adj, 1e6),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_t < 2 || self.n_x < 2 {
            return Err(Error::InvalidParameter(
                "scan needs at least two samples per axis".into(),
            ));
        }
        if !(self.t_range.0 > 0.0 && self.t_range.1 > self.t_range.0) {
            return Err(Error::InvalidParameter(format!(
                "scan time range {:?} must be positive and increasing",
                self.t_range
            )));
        }
        if !(self.x_range.0 > 0.0 && self.x_range.1 > self.x_range.0) {
            return Err(Error::InvalidParameter(format!(
                "scan space range {:?} must be positive and increasing",
                self.x_range
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// bump subsolution
// ---------------------------------------------------------------------------

/// Scans the parabolic residual of the bump `v = w - A w^{1+delta_eff}` over
/// `scan`, skipping points where the bump is cut off (`v <= 0`, `w` past the
/// cut level `A^{-1/delta_eff}`) or the reaction flow has blown up.
///
/// Under the substitutions `w_t = rho w^beta`, `w_xx = g w^beta
/// + beta h w^{2beta-1}`, `(w_x)^2 = h w^{2beta}` the residual is the closed
/// form
///
/// ```text
///     Lv = rho w^b - g w^b - b h w^{2b-1} - A(1+d) rho w^{b+d}
///          + A(1+d) (g w^{b+d} + (b+d) h w^{2b+d-1}) - f(v),
/// ```
///
/// evaluated with the actual reaction `f`.
pub fn check_bump_subsolution(
    model: &NonlinearityModel,
    profile: &InitialProfile,
    constants: &BumpConstants,
    scan: &ScanSpec,
) -> Result<ResidualReport> {
    scan.validate()?;
    let b = model.beta;
    let d = constants.delta_eff;
    let a = constants.a;
    let rho = constants.rho;
    let cut = a.powf(-1.0 / d);
    if constants.kappa < cut {
        return Err(Error::Construction(format!(
            "profile infimum {} left of x1 undercuts the bump cut level {cut}; \
             the bump would poke above the data at time zero",
            constants.kappa
        )));
    }
    let x_lo = scan.x_range.0.max(profile.x0);
    let x_hi = scan.x_range.1;
    if !(x_hi > x_lo) {
        return Err(Error::InvalidParameter(
            "bump scan range lies left of the tail".into(),
        ));
    }

    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = (0.0, 0.0);
    let mut samples = 0usize;
    for ix in 0..scan.n_x {
        let x = log_point(x_lo, x_hi, ix, scan.n_x);
        let (g, h) = tail_coefficients(profile, b, x)?;
        for it in 0..scan.n_t {
            let t = log_point(scan.t_range.0, scan.t_range.1, it, scan.n_t);
            let w = match reaction_profile_value(profile, rho, b, t, x) {
                Ok(w) => w,
                Err(Error::PastBlowup { .. }) => continue,
                Err(e) => return Err(e),
            };
            if w >= cut {
                continue;
            }
            let v = w - a * w.powf(1.0 + d);
            if v <= 0.0 {
                continue;
            }
            let wb = w.powf(b);
            let residual = rho * wb - g * wb - b * h * w.powf(2.0 * b - 1.0)
                - a * (1.0 + d) * rho * w.powf(b + d)
                + a * (1.0 + d) * (g * w.powf(b + d) + (b + d) * h * w.powf(2.0 * b + d - 1.0))
                - model.eval_clamped(v);
            samples += 1;
            if residual > worst {
                worst = residual;
                worst_at = (t, x);
            }
        }
    }
    if samples == 0 {
        return Err(Error::InsufficientData(
            "bump residual scan found no point where the bump is active".into(),
        ));
    }
    Ok(ResidualReport {
        id: "bump_subsolution".into(),
        samples,
        worst_residual: worst,
        worst_t: Some(worst_at.0),
        worst_x: worst_at.1,
        tolerance: FLOW_TOL,
        pass: worst <= FLOW_TOL,
    })
}

// ---------------------------------------------------------------------------
// transported pure-power supersolution
// ---------------------------------------------------------------------------

/// Constants of the transported pure-power supersolution `psi = min(1, w)`:
/// the tail start is pushed out until the curvature of the pure power
/// `x0_adj^alpha / x^alpha` is dominated by the rate margin, and the
/// transport rate sits `epsilon/2` above the upper reaction rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalParams {
    /// Tail decay exponent (copied from the profile).
    pub alpha: f64,
    /// Reaction degeneracy exponent (copied from the model).
    pub beta: f64,
    /// Rate margin the construction absorbs into curvature control.
    pub epsilon: f64,
    /// Adjusted tail start.
    pub x0_adj: f64,
    /// Adjusted amplitude `x0_adj^alpha`, so the profile equals 1 at
    /// `x0_adj` and dominates the original data.
    pub c_bar_adj: f64,
    /// Transport rate `r_bar + epsilon/2`.
    pub rho: f64,
}

/// Builds the parameters of the transported pure-power supersolution.
pub fn global_supersolution_params(
    model: &NonlinearityModel,
    profile: &InitialProfile,
    epsilon: f64,
) -> Result<GlobalParams> {
    let alpha = profile.alpha().ok_or_else(|| {
        Error::Unsupported("transported supersolution requires an algebraic tail".into())
    })?;
    let beta = model.beta;
    if beta <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "transported supersolution requires beta > 1, got {beta}"
        )));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "margin epsilon = {epsilon} must be positive"
        )));
    }
    // Curvature control: alpha (alpha + 1 + 2 beta alpha) / x0^2 <= eps/2.
    let x0_curv = (2.0 * alpha * (alpha + 1.0 + 2.0 * beta * alpha) / epsilon).sqrt();
    // Domination: the adjusted amplitude x0_adj^alpha must cover C_bar.
    let x0_dom = profile.c_bar.powf(1.0 / alpha);
    let x0_adj = profile.x0.max(x0_curv).max(x0_dom);
    Ok(GlobalParams {
        alpha,
        beta,
        epsilon,
        x0_adj,
        c_bar_adj: x0_adj.powf(alpha),
        rho: model.r_bar + epsilon / 2.0,
    })
}

/// The transported profile the parameters describe, with plateau 1 and the
/// pure-power tail starting (at value 1) at `x0_adj`.
pub(crate) fn adjusted_profile(params: &GlobalParams) -> Result<InitialProfile> {
    InitialProfile::algebraic(
        params.c_bar_adj,
        params.c_bar_adj,
        params.alpha,
        params.x0_adj,
        1.0,
    )
}

/// Scans `-D` where `D = rho w^b - g w^b - b h w^{2b-1} - f(w)` is the
/// parabolic excess of the transported pure-power profile, on points where
/// the profile has neither saturated (`w >= 1`) nor blown up.  Negated so
/// that, like every other report, the certificate passes iff the worst
/// stored residual stays below the tolerance.
pub fn check_global_supersolution(
    model: &NonlinearityModel,
    params: &GlobalParams,
    scan: &ScanSpec,
) -> Result<ResidualReport> {
    scan.validate()?;
    let adj = adjusted_profile(params)?;
    let b = params.beta;
    let rho = params.rho;
    let x_lo = scan.x_range.0.max(params.x0_adj);
    let x_hi = scan.x_range.1;
    if !(x_hi > x_lo) {
        return Err(Error::InvalidParameter(
            "transported-profile scan range lies left of the adjusted tail".into(),
        ));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = (0.0, 0.0);
    let mut samples = 0usize;
    for ix in 0..scan.n_x {
        let x = log_point(x_lo, x_hi, ix, scan.n_x);
        let (g, h) = tail_coefficients(&adj, b, x)?;
        for it in 0..scan.n_t {
            let t = log_point(scan.t_range.0, scan.t_range.1, it, scan.n_t);
            let w = match reaction_profile_value(&adj, rho, b, t, x) {
                Ok(w) => w,
                Err(Error::PastBlowup { .. }) => continue,
                Err(e) => return Err(e),
            };
            if w >= 1.0 {
                continue;
            }
            let wb = w.powf(b);
            let excess = rho * wb - g * wb - b * h * w.powf(2.0 * b - 1.0)
                - model.eval_clamped(w);
            samples += 1;
            if -excess > worst {
                worst = -excess;
                worst_at = (t, x);
            }
        }
    }
    if samples == 0 {
        return Err(Error::InsufficientData(
            "transported-profile scan found no point below saturation".into(),
        ));
    }
    Ok(ResidualReport {
        id: "global_supersolution".into(),
        samples,
        worst_residual: worst,
        worst_t: Some(worst_at.0),
        worst_x: worst_at.1,
        tolerance: FLOW_TOL,
        pass: worst <= FLOW_TOL,
    })
}

// ---------------------------------------------------------------------------
// ordering against simulated states
// ---------------------------------------------------------------------------

/// Worst signed margin of one ordering inequality over a run.  The margin is
/// oriented so the inequality demands `worst <= tol`; `samples` counts the
/// grid points the inequality applied to (a report with zero samples is
/// vacuous and passes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginReport {
    /// Points checked.
    pub samples: usize,
    /// Largest margin encountered.
    pub worst: f64,
    /// Snapshot time of the worst point.
    pub t: f64,
    /// Position of the worst point.
    pub x: f64,
    /// `worst <= tol` (or vacuous).
    pub pass: bool,
}

impl MarginReport {
    fn new() -> Self {
        Self {
            samples: 0,
            worst: f64::NEG_INFINITY,
            t: 0.0,
            x: 0.0,
            pass: true,
        }
    }

    fn update(&mut self, margin: f64, t: f64, x: f64) {
        self.samples += 1;
        if margin > self.worst {
            self.worst = margin;
            self.t = t;
            self.x = x;
        }
    }

    fn finish(&mut self, tol: f64) {
        if self.samples == 0 {
            self.worst = 0.0;
            self.pass = true;
        } else {
            self.pass = self.worst <= tol;
        }
    }
}

/// Comparison of a finished run against the certified objects, with a
/// discretization allowance `tol = 1e-3 + dx^2`:
///
/// * `subsolution`: `v - u <= tol` at every node of every snapshot,
/// * `supersolution`: `u - psi <= tol` for nodes right of the adjusted tail
///   start,
/// * `level_floor`: `theta_bound - u <= tol` behind the certified level
///   trajectory `y_theta(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingReport {
    /// Discretization allowance.
    pub tol: f64,
    pub subsolution: MarginReport,
    pub supersolution: MarginReport,
    pub level_floor: MarginReport,
    /// All three inequalities held.
    pub pass: bool,
}

/// Checks the three ordering inequalities on every snapshot of `run`.
pub fn check_ordering(
    run: &RunResult,
    model: &NonlinearityModel,
    profile: &InitialProfile,
    constants: &BumpConstants,
    params: &GlobalParams,
) -> Result<OrderingReport> {
    let first = run
        .snapshots
        .first()
        .ok_or_else(|| Error::InsufficientData("run holds no snapshots".into()))?;
    let alpha = profile.alpha().ok_or_else(|| {
        Error::Unsupported("ordering check requires an algebraic tail".into())
    })?;
    let beta = model.beta;
    let dx = first.dx;
    let tol = 1e-3 + dx * dx;
    let adj = adjusted_profile(params)?;
    let cut = constants.a.powf(-1.0 / constants.delta_eff);

    let mut sub = MarginReport::new();
    let mut sup = MarginReport::new();
    let mut floor = MarginReport::new();

    for snap in &run.snapshots {
        let t = snap.t;
        let y_t = y_theta(constants, profile.c, alpha, beta, t);
        for (i, &u) in snap.values.iter().enumerate() {
            let x = snap.x(i);

            // Bump below the solution, everywhere.
            let v = if t <= 0.0 {
                let w0 = profile.eval(x);
                if w0 < cut {
                    (w0 - constants.a * w0.powf(1.0 + constants.delta_eff)).max(0.0)
                } else {
                    0.0
                }
            } else {
                match reaction_profile_value(profile, constants.rho, beta, t, x) {
                    Ok(w) if w < cut => {
                        (w - constants.a * w.powf(1.0 + constants.delta_eff)).max(0.0)
                    }
                    Ok(_) => 0.0,
                    Err(Error::PastBlowup { .. }) => 0.0,
                    Err(e) => return Err(e),
                }
            };
            sub.update(v - u, t, x);

            // Transported profile above the solution, on the adjusted tail.
            if x >= params.x0_adj {
                let psi = if t <= 0.0 {
                    adj.eval(x).min(1.0)
                } else {
                    match reaction_profile_value(&adj, params.rho, beta, t, x) {
                        Ok(w) => w.min(1.0),
                        Err(Error::PastBlowup { .. }) => 1.0,
                        Err(e) => return Err(e),
                    }
                };
                sup.update(u - psi, t, x);
            }

            // Certified height behind the tracked level trajectory.
            if x <= y_t {
                floor.update(constants.theta_bound - u, t, x);
            }
        }
    }

    sub.finish(tol);
    sup.finish(tol);
    floor.finish(tol);
    let pass = sub.pass && sup.pass && floor.pass;
    Ok(OrderingReport {
        tol,
        subsolution: sub,
        supersolution: sup,
        level_floor: floor,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{run, SolverConfig};
    use crate::theory::bump_constants;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn traveling_residual_point_value() {
        // K = 1, c = 2, beta = 2, delta = 1, z = 10:
        // 2/1000 - 2/100 + f(0.1) = 0.002 - 0.02 + 0.009 = -0.009.
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        let r = traveling_residual(&model, 1.0, 2.0, 1.0, 10.0);
        assert_close(r, -0.009, 1e-12);
    }

    #[test]
    fn traveling_scan_certifies_fast_speeds_and_rejects_slow_ones() {
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        // At c = 2 the residual is z^{-3}(1 - z) <= 0 on z >= 1.
        let ok = check_traveling_supersolution(1.0, 2.0, &model, 1.0, 1e6, 10_000).unwrap();
        assert!(ok.pass, "worst {}", ok.worst_residual);
        // At c = 1.9 the residual at z = 1 is +0.1.
        let bad = check_traveling_supersolution(1.0, 1.9, &model, 1.0, 1e6, 10_000).unwrap();
        assert!(!bad.pass);
        assert_close(bad.worst_residual, 0.1, 1e-9);
        assert_close(bad.worst_x, 1.0, 1e-12);
    }

    #[test]
    fn traveling_scan_rejects_points_left_of_saturation() {
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            check_traveling_supersolution(1.0, 2.0, &model, 0.5, 1e6, 100),
            Err(Error::Domain(_))
        ));
    }

    fn accel_setup() -> (NonlinearityModel, InitialProfile) {
        let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        (model, profile)
    }

    #[test]
    fn bump_residual_scan_certifies_constructed_constants() {
        let (model, profile) = accel_setup();
        let constants = bump_constants(&model, &profile, 0.1).unwrap();
        let scan = ScanSpec::for_bump(&constants);
        let report = check_bump_subsolution(&model, &profile, &constants, &scan).unwrap();
        assert!(
            report.pass,
            "worst {} at t = {:?}, x = {}",
            report.worst_residual, report.worst_t, report.worst_x
        );
        assert!(report.worst_residual < 0.0, "bump margin should be strict");
        assert!(report.samples > 1000, "scan barely sampled: {}", report.samples);
    }

    #[test]
    fn bump_residual_scan_rejects_tampered_rate() {
        let (model, profile) = accel_setup();
        let mut constants = bump_constants(&model, &profile, 0.1).unwrap();
        // A transport rate above the reaction rate breaks the subsolution
        // property at small amplitudes.
        constants.rho = 1.2;
        let scan = ScanSpec::for_bump(&constants);
        let report = check_bump_subsolution(&model, &profile, &constants, &scan).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn global_params_match_hand_computation() {
        // alpha = 1, beta = 1.5: curvature bound needs x0 >= sqrt(2*5/eps);
        // at eps = 0.1 that is exactly 10, matching the profile's own x0.
        let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 10.0, 1.0).unwrap();
        let params = global_supersolution_params(&model, &profile, 0.1).unwrap();
        assert_close(params.x0_adj, 10.0, 1e-12);
        assert_close(params.c_bar_adj, 10.0, 1e-12);
        assert_close(params.rho, 1.05, 1e-15);
    }

    #[test]
    fn global_scan_certifies_adjusted_profile_and_rejects_slow_rate() {
        let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 10.0, 1.0).unwrap();
        let params = global_supersolution_params(&model, &profile, 0.1).unwrap();
        let scan = ScanSpec::for_global(&params);
        let report = check_global_supersolution(&model, &params, &scan).unwrap();
        assert!(
            report.pass,
            "worst {} at t = {:?}, x = {}",
            report.worst_residual, report.worst_t, report.worst_x
        );

        // A transport rate below the upper reaction rate cannot dominate the
        // reaction of small amplitudes.
        let mut slow = params;
        slow.rho = 0.9;
        let report = check_global_supersolution(&model, &slow, &scan).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn ordering_holds_on_a_short_accelerating_run() {
        let (model, profile) = accel_setup();
        let constants = bump_constants(&model, &profile, 0.1).unwrap();
        let params = global_supersolution_params(&model, &profile, 0.1).unwrap();
        let cfg = SolverConfig {
            t_end: 10.0,
            snapshot_dt: 2.0,
            margin: 20.0,
            ..SolverConfig::default()
        };
        let result = run(&model, &profile, &cfg).unwrap();
        let report = check_ordering(&result, &model, &profile, &constants, &params).unwrap();
        assert!(
            report.pass,
            "sub {:?} sup {:?} floor {:?}",
            report.subsolution, report.supersolution, report.level_floor
        );
        assert!(report.subsolution.samples > 0);
        assert!(report.supersolution.samples > 0);
        assert!(report.level_floor.samples > 0);
    }

    #[test]
    fn scan_spec_validation() {
        let spec = ScanSpec {
            n_t: 1,
            n_x: 16,
            t_range: (0.1, 1.0),
            x_range: (1.0, 10.0),
        };
        assert!(spec.validate().is_err());
        let spec = ScanSpec {
            n_t: 16,
            n_x: 16,
            t_range: (1.0, 0.1),
            x_range: (1.0, 10.0),
        };
        assert!(spec.validate().is_err());
    }
}

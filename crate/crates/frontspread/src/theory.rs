//! Closed-form spreading predictions and certified comparison constructions.
//!
//! For `u_t = u_xx + f(u)` with `f` degenerate monostable (`f(s) ~ r s^beta`
//! near 0, `beta > 1`) and front-like data with algebraic tail `C / x^alpha`,
//! level sets spread linearly in time if and only if
//!
//! ```text
//!     beta >= 1 + 1/alpha,
//! ```
//!
//! and otherwise accelerate along the power law `x ~ t^{1/(alpha(beta-1))}`.
//! This module computes that dichotomy and the explicit objects behind it:
//!
//! * two-sided envelopes `x_-(t) <= x_lambda(t) <= x_+(t)` for the
//!   accelerating regime,
//! * the diffusionless reaction flow `w` obtained by transporting the initial
//!   profile along `dw/dt = rho w^beta`, together with its blow-up horizon,
//! * the constants of a bump-shaped subsolution `v = w - A w^{1+delta}`
//!   (lower bound machinery), and
//! * a certified linear speed bound from a traveling-wave-shaped
//!   supersolution `K / z^p` (upper bound machinery, no-acceleration regime).
//!
//! Everything here is closed form or derived from closed forms by bracketed
//! scalar searches; the residual scans that actually certify the inequalities
//! live in [`crate::certificates`].

use crate::certificates::check_traveling_supersolution;
use crate::error::{Error, Result};
use crate::model::{InitialProfile, NonlinearityModel, TailClass};
use serde::Serialize;

/// Spreading regime of the level sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadingRegime {
    /// Level sets move at an asymptotically finite speed.
    NoAcceleration,
    /// Level sets run away superlinearly.
    Acceleration,
}

/// Outcome of the sharp spreading dichotomy for an algebraic tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeVerdict {
    /// Predicted regime.
    pub regime: SpreadingRegime,
    /// Signed distance `beta - (1 + 1/alpha)` to the critical hyperbola;
    /// non-negative means no acceleration.
    pub gap: f64,
    /// Whether the parameters sit on the critical curve to within `1e-12`.
    pub boundary: bool,
}

/// Sharp dichotomy: no acceleration iff `beta >= 1 + 1/alpha`.
pub fn classify_regime(alpha: f64, beta: f64) -> Result<RegimeVerdict> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tail exponent alpha = {alpha} must be positive"
        )));
    }
    if !(beta.is_finite() && beta > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "degeneracy exponent beta = {beta} must exceed 1"
        )));
    }
    let gap = beta - (1.0 + 1.0 / alpha);
    Ok(RegimeVerdict {
        regime: if gap >= 0.0 {
            SpreadingRegime::NoAcceleration
        } else {
            SpreadingRegime::Acceleration
        },
        gap,
        boundary: gap.abs() < 1e-12,
    })
}

// ---------------------------------------------------------------------------
// envelopes
// ---------------------------------------------------------------------------

/// Parameters of the two-sided spreading envelopes
///
/// ```text
///     x_-(t) = ((r - eps)     C^{beta-1} (beta-1) t)^{1/(alpha(beta-1))},
///     x_+(t) = ((r_bar + eps) C_bar^{beta-1} (beta-1) t)^{1/(alpha(beta-1))}.
/// ```
///
/// In the accelerating regime (`alpha (beta - 1) < 1`) every level set
/// `x_lambda(t)` eventually enters and stays inside `(x_-(t), x_+(t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeParams {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub r_bar: f64,
    pub c: f64,
    pub c_bar: f64,
    pub epsilon: f64,
}

impl EnvelopeParams {
    /// Builds envelope parameters from raw constants.
    pub fn new(
        alpha: f64,
        beta: f64,
        r: f64,
        r_bar: f64,
        c: f64,
        c_bar: f64,
        epsilon: f64,
    ) -> Result<Self> {
        classify_regime(alpha, beta)?;
        if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < r) {
            return Err(Error::InvalidParameter(format!(
                "envelope margin epsilon = {epsilon} must lie in (0, r = {r})"
            )));
        }
        if c <= 0.0 || c_bar < c {
            return Err(Error::InvalidParameter(format!(
                "envelope amplitudes need 0 < C <= C_bar, got {c} and {c_bar}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            r,
            r_bar,
            c,
            c_bar,
            epsilon,
        })
    }

    /// Reads the constants off a reaction model and an algebraically tailed
    /// profile.
    pub fn from_problem(
        model: &NonlinearityModel,
        profile: &InitialProfile,
        epsilon: f64,
    ) -> Result<Self> {
        let alpha = profile.alpha().ok_or_else(|| {
            Error::Unsupported("spreading envelopes require an algebraic tail".into())
        })?;
        Self::new(
            alpha,
            model.beta,
            model.r,
            model.r_bar,
            profile.c,
            profile.c_bar,
            epsilon,
        )
    }

    fn exponent(&self) -> f64 {
        1.0 / (self.alpha * (self.beta - 1.0))
    }

    /// Lower envelope `x_-(t)`.
    pub fn lower(&self, t: f64) -> f64 {
        let base = (self.r - self.epsilon)
            * self.c.powf(self.beta - 1.0)
            * (self.beta - 1.0)
            * t;
        base.max(0.0).powf(self.exponent())
    }

    /// Upper envelope `x_+(t)`.
    pub fn upper(&self, t: f64) -> f64 {
        let base = (self.r_bar + self.epsilon)
            * self.c_bar.powf(self.beta - 1.0)
            * (self.beta - 1.0)
            * t;
        base.max(0.0).powf(self.exponent())
    }
}

// ---------------------------------------------------------------------------
// diffusionless reaction flow
// ---------------------------------------------------------------------------

/// Time at which the reaction flow started from `u0(x)` reaches 1 and ceases
/// to exist: `T(x) = u0(x)^{-(beta-1)} / (rho (beta-1))`.
pub fn blowup_horizon(profile: &InitialProfile, rho: f64, beta: f64, x: f64) -> Result<f64> {
    check_flow_params(rho, beta)?;
    let u0 = profile.eval(x);
    if u0 <= 0.0 {
        return Err(Error::Domain(format!(
            "reaction flow undefined where the profile vanishes (u0({x}) = {u0})"
        )));
    }
    Ok(u0.powf(-(beta - 1.0)) / (rho * (beta - 1.0)))
}

/// Value of the reaction flow
///
/// ```text
///     w(t, x) = (u0(x)^{-(beta-1)} - rho (beta-1) t)^{-1/(beta-1)},
/// ```
///
/// i.e. the solution of `dw/dt = rho w^beta`, `w(0, x) = u0(x)`, frozen in
/// space.  Errors with the blow-up horizon once `t >= T(x)`.
pub fn reaction_profile_value(
    profile: &InitialProfile,
    rho: f64,
    beta: f64,
    t: f64,
    x: f64,
) -> Result<f64> {
    check_flow_params(rho, beta)?;
    let u0 = profile.eval(x);
    if u0 <= 0.0 {
        return Err(Error::Domain(format!(
            "reaction flow undefined where the profile vanishes (u0({x}) = {u0})"
        )));
    }
    let depth = u0.powf(-(beta - 1.0)) - rho * (beta - 1.0) * t;
    if depth <= 0.0 {
        return Err(Error::PastBlowup {
            horizon: u0.powf(-(beta - 1.0)) / (rho * (beta - 1.0)),
        });
    }
    Ok(depth.powf(-1.0 / (beta - 1.0)))
}

fn check_flow_params(rho: f64, beta: f64) -> Result<()> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("flow rate rho = {rho} must be positive")));
    }
    if !(beta.is_finite() && beta > 1.0) {
        return Err(Error::InvalidParameter(format!("flow exponent beta = {beta} must exceed 1")));
    }
    Ok(())
}

/// Geometry coefficients of the tail under the substitution `w = w(u0)`:
///
/// ```text
///     g(x) = u0''(x) / u0(x)^beta - beta u0'(x)^2 / u0(x)^{beta+1},
///     h(x) = u0'(x)^2 / u0(x)^{2 beta},
/// ```
///
/// so that `w_xx = g w^beta + beta h w^{2 beta - 1}` and `(w_x)^2 = h w^{2 beta}`
/// along the reaction flow.  Requires a point on an analytic tail.
pub fn tail_coefficients(profile: &InitialProfile, beta: f64, x: f64) -> Result<(f64, f64)> {
    let u0 = profile.eval(x);
    let d1 = profile.tail_first_derivative(x)?;
    let d2 = profile.tail_second_derivative(x)?;
    let g = d2 / u0.powf(beta) - beta * d1 * d1 / u0.powf(beta + 1.0);
    let h = d1 * d1 / u0.powf(2.0 * beta);
    Ok((g, h))
}

// ---------------------------------------------------------------------------
// bump subsolution constants (accelerating lower bound)
// ---------------------------------------------------------------------------

/// Constants defining the bump-shaped subsolution `v = w - A w^{1+delta_eff}`
/// built on the reaction flow with rate `rho`, valid for `x >= x1` and cut
/// off where `w >= A^{-1/delta_eff}`.
///
/// The fields record the effective parameters actually used: when the model's
/// saturation exponent is too small for the construction (`beta >= 1 + delta`)
/// the envelope is relaxed to `delta_eff = beta` with a slightly reduced rate,
/// and `relaxed` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpConstants {
    /// Margin the construction was asked to respect.
    pub epsilon: f64,
    /// Effective lower reaction rate.
    pub r_eff: f64,
    /// Effective saturation exponent.
    pub delta_eff: f64,
    /// Right end of the interval where the effective lower envelope holds.
    pub s0_eff: f64,
    /// Transport rate of the underlying reaction flow, inside
    /// `(max(beta r_eff/(1+delta_eff), r_eff - epsilon), r_eff)`.
    pub rho: f64,
    /// Tail threshold beyond which the curvature terms are dominated.
    pub x1: f64,
    /// Infimum of the initial profile left of `x1`.
    pub kappa: f64,
    /// Bump correction amplitude `A` in `v = w - A w^{1+delta_eff}`.
    pub a: f64,
    /// Reference level `theta = A^{-1/delta_eff} / 2` tracked by the bump.
    pub theta: f64,
    /// Certified height: the solution stays above this value behind the
    /// trajectory of the `theta` level.
    pub theta_bound: f64,
    /// Whether the saturation exponent had to be relaxed.
    pub relaxed: bool,
}

/// Builds the constants of the bump subsolution for an accelerating
/// configuration.  Requires an algebraic tail with `alpha (beta - 1) < 1` and
/// a margin `0 < epsilon < r`.
pub fn bump_constants(
    model: &NonlinearityModel,
    profile: &InitialProfile,
    epsilon: f64,
) -> Result<BumpConstants> {
    let alpha = profile.alpha().ok_or_else(|| {
        Error::Unsupported("bump construction requires an algebraic tail".into())
    })?;
    let beta = model.beta;
    let verdict = classify_regime(alpha, beta)?;
    if verdict.regime != SpreadingRegime::Acceleration {
        return Err(Error::Construction(format!(
            "bump construction applies only in the accelerating regime \
             (alpha = {alpha}, beta = {beta} gives gap {})",
            verdict.gap
        )));
    }
    if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < model.r) {
        return Err(Error::InvalidParameter(format!(
            "margin epsilon = {epsilon} must lie in (0, r = {})",
            model.r
        )));
    }

    // Effective envelope: the interval for rho below is nonempty only when
    // beta < 1 + delta.  Otherwise trade rate for saturation exponent: the
    // reaction still dominates r_eff s^beta (1 - s^beta) on a (numerically
    // determined) neighbourhood of 0.
    let relaxed = beta >= 1.0 + model.delta;
    let (r_eff, delta_eff, s0_eff) = if relaxed {
        let r_eff = model.r - epsilon / 2.0;
        let delta_eff = beta;
        let s0_eff = scan_envelope_reach(model, r_eff, beta, delta_eff)?;
        (r_eff, delta_eff, s0_eff)
    } else {
        (model.r, model.delta, model.s0)
    };

    // Transport rate: strictly between the saturation-forced floor and r_eff,
    // and no further than epsilon below r_eff so the lower envelope is kept.
    let rho_floor = (beta * r_eff / (1.0 + delta_eff)).max(r_eff - epsilon);
    if rho_floor >= r_eff {
        return Err(Error::Construction(format!(
            "no admissible transport rate: floor {rho_floor} >= r_eff {r_eff}"
        )));
    }
    let rho = 0.5 * (rho_floor + r_eff);

    // Tail threshold x1: both curvature bounds
    //   |g| + beta |h|              <= (r_eff - rho)/2,
    //   |g| + (delta_eff+beta) |h|  <= (rho - beta r_eff/(1+delta_eff))/2
    // must hold from x1 onwards.
    let thr1 = 0.5 * (r_eff - rho);
    let thr2 = 0.5 * (rho - beta * r_eff / (1.0 + delta_eff));
    let admissible = |x: f64| -> Result<bool> {
        let (g, h) = tail_coefficients(profile, beta, x)?;
        Ok(g.abs() + beta * h.abs() <= thr1 && g.abs() + (delta_eff + beta) * h.abs() <= thr2)
    };
    let x1 = find_tail_threshold(profile.x0, &admissible)?;

    let kappa = profile.infimum_up_to(x1);
    if kappa <= 0.0 {
        return Err(Error::Construction(format!(
            "profile infimum up to x1 = {x1} is not positive"
        )));
    }

    // Correction amplitude: large enough that (i) the bump is non-positive
    // wherever the profile exceeds kappa, (ii) the saturated reaction excess
    // is absorbed, (iii) the bump's maximum stays inside [0, s0_eff].
    let mut a = 1.01 * (kappa.powf(-delta_eff)).max(
        (2.0 * r_eff / (1.0 + delta_eff)) / (rho - beta * r_eff / (1.0 + delta_eff)),
    );
    let mut guard = 0;
    while (delta_eff / (1.0 + delta_eff)) * (a * (1.0 + delta_eff)).powf(-1.0 / delta_eff) > s0_eff
    {
        a *= 1.5;
        guard += 1;
        if guard > 200 {
            return Err(Error::Construction(
                "bump amplitude ladder failed to bring the bump height under s0".into(),
            ));
        }
    }

    let theta = 0.5 * a.powf(-1.0 / delta_eff);
    let bump_height_at_theta = theta - a * theta.powf(1.0 + delta_eff);
    let theta_start = (profile.c / theta).powf(1.0 / alpha);
    let theta_bound = bump_height_at_theta.min(profile.infimum_up_to(theta_start));

    Ok(BumpConstants {
        epsilon,
        r_eff,
        delta_eff,
        s0_eff,
        rho,
        x1,
        kappa,
        a,
        theta,
        theta_bound,
        relaxed,
    })
}

/// Largest `s*` such that `f(s) >= r_eff s^beta (1 - s^delta_eff)` on the
/// whole grid prefix `[0, s*]`.
fn scan_envelope_reach(
    model: &NonlinearityModel,
    r_eff: f64,
    beta: f64,
    delta_eff: f64,
) -> Result<f64> {
    const N: usize = 4000;
    let mut reach = 0.0;
    for j in 1..N {
        let s = j as f64 / N as f64;
        let envelope = r_eff * s.powf(beta) * (1.0 - s.powf(delta_eff));
        if model.eval_clamped(s) + 1e-15 < envelope {
            break;
        }
        reach = s;
    }
    if reach < 1e-3 {
        return Err(Error::Construction(format!(
            "relaxed reaction envelope holds only up to s = {reach}; construction impossible"
        )));
    }
    Ok(reach)
}

/// Finds the smallest abscissa `x1 >= x_start` from which `admissible` stays
/// true, by geometric bracketing, bisection, and a log-spaced verification
/// sweep far beyond the candidate.
fn find_tail_threshold(
    x_start: f64,
    admissible: &dyn Fn(f64) -> Result<bool>,
) -> Result<f64> {
    let mut lo = x_start;
    for _round in 0..20 {
        // Bracket: geometric search for a first admissible point.
        let mut hi = lo;
        while !admissible(hi)? {
            hi *= 2.0;
            if hi > 1e30 {
                return Err(Error::Construction(
                    "no admissible tail threshold found below 1e30".into(),
                ));
            }
        }
        let x1 = if hi == lo {
            lo
        } else {
            // Bisect [hi/2, hi]: hi/2 failed (or is lo), hi passed.
            let mut bad = (hi / 2.0).max(lo);
            let mut good = hi;
            for _ in 0..80 {
                let mid = 0.5 * (bad + good);
                if admissible(mid)? {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        };
        // Verify on a long log-spaced sweep; the curvature coefficients are
        // not a priori monotone, so a later violation pushes the search past
        // the worst offender.
        let sweep_hi = (1e8f64).max(100.0 * x1);
        let mut worst_violation = None;
        for i in 0..200 {
            let x = x1 * (sweep_hi / x1).powf(i as f64 / 199.0);
            if !admissible(x)? {
                worst_violation = Some(x);
            }
        }
        match worst_violation {
            None => return Ok(x1),
            Some(x) => lo = 2.0 * x,
        }
    }
    Err(Error::Construction(
        "tail threshold verification kept failing; curvature bounds do not settle".into(),
    ))
}

/// Trajectory of the `theta` level of the reaction flow for a pure algebraic
/// tail `C / x^alpha`:
///
/// ```text
///     y_theta(t) = ((C/theta)^{beta-1} + rho C^{beta-1} (beta-1) t)^{1/(alpha(beta-1))}.
/// ```
pub fn y_theta(constants: &BumpConstants, c: f64, alpha: f64, beta: f64, t: f64) -> f64 {
    let bm1 = beta - 1.0;
    ((c / constants.theta).powf(bm1) + constants.rho * c.powf(bm1) * bm1 * t)
        .powf(1.0 / (alpha * bm1))
}

// ---------------------------------------------------------------------------
// linear speed bound (no-acceleration upper bound)
// ---------------------------------------------------------------------------

/// A certified traveling bound: in the frame `z = x - c t + shift`, the
/// profile `min(1, K / z^p)` with `p = 1/(beta-1)` is a supersolution, so no
/// level set can outrun speed `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedBound {
    /// Certified speed.
    pub c: f64,
    /// Profile amplitude `K = max(1, C_bar)`.
    pub k: f64,
    /// Tail exponent of the traveling profile, `1/(beta-1)`.
    pub p: f64,
    /// Saturation point `z0 = K^{1/p}` where the profile reaches 1.
    pub z0: f64,
}

/// Certifies a finite spreading speed for configurations without
/// acceleration (algebraic tail with `beta >= 1 + 1/alpha`, or any tail
/// lighter than algebraic).
///
/// Starts from the rate `1.05 r (beta-1) K^{beta-1}` suggested by the leading
/// balance of the residual and raises it geometrically until the traveling
/// residual scan certifies it.
pub fn certified_speed_bound(
    model: &NonlinearityModel,
    profile: &InitialProfile,
) -> Result<SpeedBound> {
    let beta = model.beta;
    if beta <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "speed bound requires beta > 1, got {beta}"
        )));
    }
    match profile.classify_tail()? {
        TailClass::LighterThanAlgebraic => {}
        TailClass::Algebraic { alpha } => {
            let verdict = classify_regime(alpha, beta)?;
            if verdict.regime != SpreadingRegime::NoAcceleration {
                return Err(Error::Construction(format!(
                    "speed bound applies only without acceleration \
                     (alpha = {alpha}, beta = {beta} gives gap {})",
                    verdict.gap
                )));
            }
        }
        TailClass::HeavierThanAlgebraic => {
            return Err(Error::Construction(
                "tails heavier than algebraic always accelerate; no finite speed exists".into(),
            ));
        }
    }

    let k = profile.c_bar.max(1.0);
    let p = 1.0 / (beta - 1.0);
    let z0 = k.powf(beta - 1.0);
    let mut c = 1.05 * model.r * (beta - 1.0) * k.powf(beta - 1.0);
    for _ in 0..40 {
        let report = check_traveling_supersolution(k, c, model, z0, 1e6, 10_000)?;
        if report.pass {
            return Ok(SpeedBound { c, k, p, z0 });
        }
        c *= 1.5;
    }
    Err(Error::Construction(
        "speed ladder failed to certify a traveling bound".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InitialProfile;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn dichotomy_matches_hand_classification() {
        // alpha = 1, beta = 2 sits exactly on the critical curve: no
        // acceleration, boundary case.
        let v = classify_regime(1.0, 2.0).unwrap();
        assert_eq!(v.regime, SpreadingRegime::NoAcceleration);
        assert!(v.boundary);
        assert_close(v.gap, 0.0, 1e-15);

        // Heavy tail, weak degeneracy: accelerates.
        let v = classify_regime(2.0, 1.2).unwrap();
        assert_eq!(v.regime, SpreadingRegime::Acceleration);
        assert_close(v.gap, -0.3, 1e-12);

        // Light tail, strong degeneracy on the curve again.
        let v = classify_regime(0.5, 3.0).unwrap();
        assert_eq!(v.regime, SpreadingRegime::NoAcceleration);
        assert!(v.boundary);

        assert!(classify_regime(-1.0, 2.0).is_err());
        assert!(classify_regime(1.0, 1.0).is_err());
    }

    #[test]
    fn envelope_point_values() {
        // alpha = 1, beta = 3/2, r = r_bar = C = C_bar = 1, eps = 0.1:
        // x_-(10) = (0.9 * 0.5 * 10)^2 = 20.25, x_+(10) = (1.1 * 0.5 * 10)^2 = 30.25.
        let env = EnvelopeParams::new(1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 0.1).unwrap();
        assert_close(env.lower(10.0), 20.25, 1e-12);
        assert_close(env.upper(10.0), 30.25, 1e-12);
        assert_eq!(env.lower(0.0), 0.0);
        assert!(env.lower(5.0) < env.upper(5.0));
    }

    #[test]
    fn envelope_reads_problem_constants() {
        let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let env = EnvelopeParams::from_problem(&model, &profile, 0.1).unwrap();
        assert_close(env.lower(10.0), 20.25, 1e-12);
        let se = InitialProfile::stretched_exponential(1.0, 1.0, 0.5, 2.0, 1.0).unwrap();
        assert!(matches!(
            EnvelopeParams::from_problem(&model, &se, 0.1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn envelope_rejects_bad_margin() {
        assert!(EnvelopeParams::new(1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.5).is_err());
        assert!(EnvelopeParams::new(1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn reaction_flow_point_values_and_horizon() {
        // u0 = 1/x, x = 10, rho = 0.9, beta = 2: depth = 10 - 0.9 t,
        // T = 10/0.9 = 100/9, w(5) = 1/5.5.
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let horizon = blowup_horizon(&profile, 0.9, 2.0, 10.0).unwrap();
        assert_close(horizon, 100.0 / 9.0, 1e-12);
        let w = reaction_profile_value(&profile, 0.9, 2.0, 5.0, 10.0).unwrap();
        assert_close(w, 1.0 / 5.5, 1e-12);
        // Monotone increasing in t up to blow-up.
        let w_later = reaction_profile_value(&profile, 0.9, 2.0, 10.0, 10.0).unwrap();
        assert!(w_later > w);
        match reaction_profile_value(&profile, 0.9, 2.0, 12.0, 10.0) {
            Err(Error::PastBlowup { horizon }) => assert_close(horizon, 100.0 / 9.0, 1e-12),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn tail_coefficient_point_values() {
        // u0 = 1/x, beta = 3/2: g = 0.5 x^{-3/2}, h = 1/x.
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let (g, h) = tail_coefficients(&profile, 1.5, 100.0).unwrap();
        assert_close(g, 0.0005, 1e-15);
        assert_close(h, 0.01, 1e-15);
    }

    #[test]
    fn bump_constants_for_direct_branch() {
        // r = 1, beta = 3/2, delta = 1, alpha = 1, eps = 0.1: the saturation
        // interval for rho is (max(0.75, 0.9), 1) so rho = 0.95.
        let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let c = bump_constants(&model, &profile, 0.1).unwrap();
        assert!(!c.relaxed);
        assert_close(c.rho, 0.95, 1e-12);
        assert_eq!(c.r_eff, 1.0);
        assert_eq!(c.delta_eff, 1.0);
        assert!(c.x1 >= profile.x0);

        // The curvature bounds hold at x1 and keep holding beyond it.
        let thr1 = 0.5 * (c.r_eff - c.rho);
        let thr2 = 0.5 * (c.rho - model.beta * c.r_eff / (1.0 + c.delta_eff));
        for mult in [1.0, 2.0, 10.0, 1e3] {
            let (g, h) = tail_coefficients(&profile, model.beta, c.x1 * mult).unwrap();
            assert!(g.abs() + model.beta * h.abs() <= thr1 * (1.0 + 1e-9));
            assert!(g.abs() + (c.delta_eff + model.beta) * h.abs() <= thr2 * (1.0 + 1e-9));
        }
        // ... and x1 is minimal up to the bracketing tolerance.
        if c.x1 > profile.x0 * 1.01 {
            let (g, h) = tail_coefficients(&profile, model.beta, c.x1 * 0.9).unwrap();
            let ok1 = g.abs() + model.beta * h.abs() <= thr1;
            let ok2 = g.abs() + (c.delta_eff + model.beta) * h.abs() <= thr2;
            assert!(!(ok1 && ok2), "x1 = {} is not minimal", c.x1);
        }

        // Amplitude dominates both of its floors and respects the height cap.
        assert!(c.a >= c.kappa.powf(-c.delta_eff));
        assert!(
            c.a >= (2.0 * c.r_eff / (1.0 + c.delta_eff))
                / (c.rho - model.beta * c.r_eff / (1.0 + c.delta_eff))
        );
        let height = (c.delta_eff / (1.0 + c.delta_eff))
            * (c.a * (1.0 + c.delta_eff)).powf(-1.0 / c.delta_eff);
        assert!(height <= c.s0_eff);
        assert_close(c.theta, 0.5 * c.a.powf(-1.0 / c.delta_eff), 1e-15);
        assert!(c.theta_bound > 0.0 && c.theta_bound <= c.theta);
    }

    #[test]
    fn bump_constants_relax_small_saturation_exponents() {
        // beta = 2 >= 1 + delta = 2: the direct interval is empty, so the
        // construction must relax.  f = s^2(1-s) >= 0.9 s^2 (1 - s^2) exactly
        // on [0, 1/9].
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 0.5, 2.0, 1.0).unwrap();
        let c = bump_constants(&model, &profile, 0.2).unwrap();
        assert!(c.relaxed);
        assert_close(c.r_eff, 0.9, 1e-15);
        assert_eq!(c.delta_eff, 2.0);
        assert!(c.s0_eff > 0.10 && c.s0_eff < 0.12, "s0_eff = {}", c.s0_eff);
        assert!(c.rho > 0.0 && c.rho < c.r_eff);
    }

    #[test]
    fn bump_constants_reject_non_accelerating_setups() {
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 2.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            bump_constants(&model, &profile, 0.1),
            Err(Error::Construction(_))
        ));
        let acc_profile = InitialProfile::algebraic(1.0, 1.0, 0.5, 2.0, 1.0).unwrap();
        assert!(bump_constants(&model, &acc_profile, 2.0).is_err()); // eps >= r
    }

    #[test]
    fn theta_level_trajectory_point_values() {
        // C = 1, theta = 1/2, beta = 2, alpha = 1, rho = 0.9:
        // y(0) = 2, y(10) = 2 + 9 = 11.
        let constants = BumpConstants {
            epsilon: 0.1,
            r_eff: 1.0,
            delta_eff: 1.0,
            s0_eff: 0.5,
            rho: 0.9,
            x1: 10.0,
            kappa: 0.1,
            a: 1.0,
            theta: 0.5,
            theta_bound: 0.25,
            relaxed: false,
        };
        assert_close(y_theta(&constants, 1.0, 1.0, 2.0, 0.0), 2.0, 1e-12);
        assert_close(y_theta(&constants, 1.0, 1.0, 2.0, 10.0), 11.0, 1e-12);
    }

    #[test]
    fn speed_bound_ladder_lands_on_frozen_value() {
        // r = 1, beta = 2, K = 1: the residual at z = 1 is 2 - c, so the
        // ladder 1.05 -> 1.575 -> 2.3625 certifies on its third rung.
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 2.0, 2.0, 1.0).unwrap();
        let bound = certified_speed_bound(&model, &profile).unwrap();
        assert_close(bound.c, 2.3625, 1e-12);
        assert_eq!(bound.k, 1.0);
        assert_eq!(bound.p, 1.0);
        assert_eq!(bound.z0, 1.0);
    }

    #[test]
    fn speed_bound_accepts_light_tails_and_rejects_heavy() {
        let model = NonlinearityModel::canonical(1.0, 2.0, 1.0).unwrap();
        let light = InitialProfile::stretched_exponential(1.0, 1.0, 0.5, 2.0, 1.0).unwrap();
        assert!(certified_speed_bound(&model, &light).unwrap().c > 0.0);
        let heavy = InitialProfile::log_algebraic(1.0, 1.0, 3.0, 1.0).unwrap();
        assert!(matches!(
            certified_speed_bound(&model, &heavy),
            Err(Error::Construction(_))
        ));
        let accel = InitialProfile::algebraic(1.0, 1.0, 0.5, 2.0, 1.0).unwrap();
        assert!(certified_speed_bound(&model, &accel).is_err());
    }
}

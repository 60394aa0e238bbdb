//! Explicit finite-difference integration of `u_t = u_xx + f(u)` on an
//! expanding line segment.
//!
//! The scheme is forward Euler in time with the standard three-point
//! Laplacian, `dt = cfl * dx^2` with `cfl <= 1/2`.  Under that constraint the
//! update is monotone: larger data produce larger updates node by node, so
//! the discrete evolution inherits the comparison structure of the continuous
//! equation, which the ordering certificates rely on.
//!
//! The left boundary is held at the plateau value of the initial profile
//! (Dirichlet); the rightmost node evolves by reaction alone, which is
//! accurate as long as the front stays away from it.  To keep it away, a
//! sensor near the right edge watches for growth above a fixed multiple of
//! the initial profile and triggers a rightward expansion of the domain; the
//! newly created nodes are seeded with the initial profile transported by the
//! reaction ODE (classic fourth-order Runge–Kutta with a fixed substep, so
//! reruns are bit-for-bit deterministic).
//!
//! States never leave `[0, 1]`: values that drift out by more than a strict
//! tolerance abort the run as a stability failure, while sub-tolerance
//! rounding dust is clamped silently.

use crate::error::{Error, Result};
use crate::exec;
use crate::levelsets::{extract_level, LevelTrajectory};
use crate::model::{InitialProfile, NonlinearityModel};
use std::sync::atomic::{AtomicBool, Ordering};

/// Allowed excursion outside `[0, 1]` before a state aborts the run.
const BAND_TOL: f64 = 1e-12;

/// Fixed substep of the reaction-only integrator used to seed new nodes.
const REACTION_SUBSTEP: f64 = 0.25;

/// Policy for growing the domain to the right ahead of the front.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionPolicy {
    /// Sensor position as a fraction of the domain width left of the right
    /// edge.
    pub sensor_fraction: f64,
    /// Width growth per expansion, as a fraction of the current width.
    pub growth_factor: f64,
    /// Expansion triggers when the sensed value exceeds this multiple of the
    /// initial profile at the sensor.
    pub trigger_ratio: f64,
}

impl Default for ExpansionPolicy {
    fn default() -> Self {
        Self {
            sensor_fraction: 0.2,
            growth_factor: 0.5,
            trigger_ratio: 2.0,
        }
    }
}

/// Treatment of the left edge of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeftBoundary {
    /// Hold the plateau value of the initial profile.
    #[default]
    DirichletPlateau,
}

/// Treatment of the right edge of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RightBoundary {
    /// Evolve the last node by the reaction ODE alone.
    #[default]
    ReactionOnly,
}

/// Discretization and orchestration parameters for [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Grid spacing.
    pub dx: f64,
    /// Stability number; the time step is `cfl * dx^2` and must satisfy
    /// `cfl <= 1/2`.
    pub cfl: f64,
    /// Final time.
    pub t_end: f64,
    /// Cadence of snapshots and level-set samples.
    pub snapshot_dt: f64,
    /// Left edge of the domain; defaults to sixty units left of the plateau
    /// end so the Dirichlet condition sits firmly on the plateau.
    pub x_left: Option<f64>,
    /// Initial distance between the tail start of the profile and the right
    /// edge.
    pub margin: f64,
    /// Rightward growth policy; `None` freezes the domain.
    pub expansion: Option<ExpansionPolicy>,
    /// Hard cap on the node count.
    pub max_nodes: usize,
    /// Level values in `(0, 1)` whose crossing positions are tracked.
    pub levels: Vec<f64>,
    /// Left edge treatment.
    pub left_boundary: LeftBoundary,
    /// Right edge treatment.
    pub right_boundary: RightBoundary,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dx: 0.1,
            cfl: 0.4,
            t_end: 100.0,
            snapshot_dt: 1.0,
            x_left: None,
            margin: 50.0,
            expansion: Some(ExpansionPolicy::default()),
            max_nodes: 2_000_000,
            levels: Vec::new(),
            left_boundary: LeftBoundary::DirichletPlateau,
            right_boundary: RightBoundary::ReactionOnly,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dx.is_finite() && self.dx > 0.0) {
            return Err(Error::InvalidParameter(format!("dx = {} must be positive", self.dx)));
        }
        if !(self.cfl.is_finite() && self.cfl > 0.0) {
            return Err(Error::InvalidParameter(format!("cfl = {} must be positive", self.cfl)));
        }
        if self.cfl > 0.5 {
            return Err(Error::InvalidParameter(format!(
                "cfl = {} exceeds 1/2; the explicit scheme would be unstable and non-monotone",
                self.cfl
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t_end = {} must be non-negative",
                self.t_end
            )));
        }
        if !(self.snapshot_dt.is_finite() && self.snapshot_dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "snapshot_dt = {} must be positive",
                self.snapshot_dt
            )));
        }
        if !(self.margin.is_finite() && self.margin > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "margin = {} must be positive",
                self.margin
            )));
        }
        if self.max_nodes < 3 {
            return Err(Error::InvalidParameter(
                "max_nodes must allow at least three nodes".into(),
            ));
        }
        for &l in &self.levels {
            if !(l.is_finite() && 0.0 < l && l < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "tracked level {l} must lie strictly inside (0, 1)"
                )));
            }
        }
        if let Some(p) = &self.expansion {
            if !(0.0 < p.sensor_fraction && p.sensor_fraction < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "sensor_fraction = {} must lie in (0, 1)",
                    p.sensor_fraction
                )));
            }
            if !(p.growth_factor.is_finite() && p.growth_factor > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "growth_factor = {} must be positive",
                    p.growth_factor
                )));
            }
            if !(p.trigger_ratio.is_finite() && p.trigger_ratio > 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "trigger_ratio = {} must exceed 1",
                    p.trigger_ratio
                )));
            }
        }
        Ok(())
    }
}

/// One recorded state of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Simulation time of the record.
    pub t: f64,
    /// Position of node 0.
    pub x_left: f64,
    /// Grid spacing.
    pub dx: f64,
    /// Node values, left to right.
    pub values: Vec<f64>,
}

impl Snapshot {
    /// Position of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx
    }
}

/// Everything a finished integration produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Grid states at the snapshot cadence (initial and final states
    /// included).
    pub snapshots: Vec<Snapshot>,
    /// Level-set positions sampled at the snapshot cadence.
    pub trajectories: Vec<LevelTrajectory>,
    /// Conservative bulk invasion rate: the minimum over the final third of
    /// the run of (rightmost position up to which the state exceeds 0.99,
    /// divided by time).  Absent when the state never saturates.
    pub gamma_hat: Option<f64>,
    /// Times at which the domain was expanded.
    pub expansion_times: Vec<f64>,
}

/// Single node update shared verbatim by the parallel and sequential
/// kernels, so the two produce bit-identical states.
#[inline(always)]
fn node_update(
    model: &NonlinearityModel,
    prev: &[f64],
    i: usize,
    inv_dx2: f64,
    dt: f64,
    eta: f64,
) -> f64 {
    let n = prev.len();
    if i == 0 {
        eta
    } else if i == n - 1 {
        let u = prev[i];
        u + dt * model.eval_clamped(u)
    } else {
        let u = prev[i];
        u + dt * ((prev[i - 1] - 2.0 * u + prev[i + 1]) * inv_dx2 + model.eval_clamped(u))
    }
}

/// Advances one time step, writing into `next` (parallel when the `parallel`
/// feature is active).  Returns whether any raw update left `[0, 1]` by more
/// than the stability tolerance; sub-tolerance dust is clamped silently.
pub fn step(
    model: &NonlinearityModel,
    prev: &[f64],
    next: &mut [f64],
    dx: f64,
    dt: f64,
    eta: f64,
) -> bool {
    assert_eq!(prev.len(), next.len(), "step buffers must match");
    let inv_dx2 = 1.0 / (dx * dx);
    let out_of_band = AtomicBool::new(false);
    exec::fill_indexed(next, |i| {
        let raw = node_update(model, prev, i, inv_dx2, dt, eta);
        if !(-BAND_TOL..=1.0 + BAND_TOL).contains(&raw) {
            out_of_band.store(true, Ordering::Relaxed);
        }
        raw.clamp(0.0, 1.0)
    });
    out_of_band.load(Ordering::Relaxed)
}

/// Reference implementation of [`step`] as a plain sequential loop.  Kept
/// unconditionally compiled so the data-parallel path can always be checked
/// against it (the two are bit-identical); also the baseline of the
/// benchmark suite.
pub fn step_sequential(
    model: &NonlinearityModel,
    prev: &[f64],
    next: &mut [f64],
    dx: f64,
    dt: f64,
    eta: f64,
) -> bool {
    assert_eq!(prev.len(), next.len(), "step buffers must match");
    let inv_dx2 = 1.0 / (dx * dx);
    let mut out_of_band = false;
    for (i, slot) in next.iter_mut().enumerate() {
        let raw = node_update(model, prev, i, inv_dx2, dt, eta);
        if !(-BAND_TOL..=1.0 + BAND_TOL).contains(&raw) {
            out_of_band = true;
        }
        *slot = raw.clamp(0.0, 1.0);
    }
    out_of_band
}

/// Locates the worst out-of-band raw update for the error report.
fn find_band_violation(
    model: &NonlinearityModel,
    prev: &[f64],
    dx: f64,
    dt: f64,
    eta: f64,
) -> (usize, f64) {
    let inv_dx2 = 1.0 / (dx * dx);
    let mut worst = (0, 0.0);
    let mut worst_excess = 0.0;
    for i in 0..prev.len() {
        let raw = node_update(model, prev, i, inv_dx2, dt, eta);
        let excess = (-raw).max(raw - 1.0);
        if excess > worst_excess {
            worst_excess = excess;
            worst = (i, raw);
        }
    }
    worst
}

/// Transports a reaction state from time 0 to `t_target` along `du/dt = f(u)`
/// by classic fourth-order Runge–Kutta with the fixed substep
/// [`REACTION_SUBSTEP`] (final partial substep to land exactly).
pub fn advance_reaction(model: &NonlinearityModel, u0: f64, t_target: f64) -> f64 {
    let mut u = u0.clamp(0.0, 1.0);
    let mut s = 0.0;
    while s < t_target - 1e-12 {
        let h = REACTION_SUBSTEP.min(t_target - s);
        let k1 = model.eval_clamped(u);
        let k2 = model.eval_clamped(u + 0.5 * h * k1);
        let k3 = model.eval_clamped(u + 0.5 * h * k2);
        let k4 = model.eval_clamped(u + h * k3);
        u = (u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).clamp(0.0, 1.0);
        s += h;
    }
    u
}

/// Integrates the problem to `t_end`, recording snapshots and level-set
/// trajectories at the configured cadence.  Deterministic: identical inputs
/// produce bit-identical results, independent of thread count.
pub fn run(
    model: &NonlinearityModel,
    profile: &InitialProfile,
    config: &SolverConfig,
) -> Result<RunResult> {
    config.validate()?;

    let eta = profile.eta;
    let x_left = config.x_left.unwrap_or(profile.x_glue() - 60.0);
    if (profile.eval(x_left) - eta).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "left edge x = {x_left} does not sit on the plateau (u0 = {}, plateau = {eta})",
            profile.eval(x_left)
        )));
    }
    let dx = config.dx;
    let x_right = profile.x0 + config.margin;
    if x_right <= x_left + 2.0 * dx {
        return Err(Error::InvalidParameter(format!(
            "domain [{x_left}, {x_right}] is too narrow for the grid"
        )));
    }
    let n0 = ((x_right - x_left) / dx).round() as usize + 1;
    if n0 > config.max_nodes {
        return Err(Error::ResourceLimit {
            requested: n0,
            cap: config.max_nodes,
        });
    }
    let dt = config.cfl * dx * dx;

    let mut values = vec![0.0; n0];
    exec::fill_indexed(&mut values, |i| {
        profile.eval(x_left + i as f64 * dx).clamp(0.0, 1.0)
    });
    values[0] = eta;
    let mut scratch = values.clone();

    let mut snapshots: Vec<Snapshot> = Vec::new();
    let mut trajectories: Vec<LevelTrajectory> = config
        .levels
        .iter()
        .map(|&lambda| LevelTrajectory {
            lambda,
            samples: Vec::new(),
        })
        .collect();
    let mut expansion_times: Vec<f64> = Vec::new();

    let record = |t: f64,
                  values: &[f64],
                  snapshots: &mut Vec<Snapshot>,
                  trajectories: &mut Vec<LevelTrajectory>| {
        snapshots.push(Snapshot {
            t,
            x_left,
            dx,
            values: values.to_vec(),
        });
        for traj in trajectories.iter_mut() {
            traj.samples.push((t, extract_level(values, x_left, dx, traj.lambda)));
        }
    };

    let sensor_for = |n: usize| -> (usize, f64) {
        let x_r = x_left + (n - 1) as f64 * dx;
        let x_sensor = match &config.expansion {
            Some(p) => x_r - p.sensor_fraction * (x_r - x_left),
            None => x_r,
        };
        let idx = (((x_sensor - x_left) / dx).round() as usize).min(n - 1);
        let u0_here = profile.eval(x_left + idx as f64 * dx);
        let threshold = match &config.expansion {
            Some(p) => p.trigger_ratio * u0_here,
            None => f64::INFINITY,
        };
        (idx, threshold)
    };

    record(0.0, &values, &mut snapshots, &mut trajectories);
    let (mut sensor_idx, mut sensor_threshold) = sensor_for(values.len());
    let mut t = 0.0;
    let mut next_snapshot = config.snapshot_dt;

    while t < config.t_end - 1e-12 {
        let dt_step = dt.min(config.t_end - t);
        let violated = step(model, &values, &mut scratch, dx, dt_step, eta);
        if violated {
            let (i, value) = find_band_violation(model, &values, dx, dt_step, eta);
            return Err(Error::NumericalStability {
                t: t + dt_step,
                x: x_left + i as f64 * dx,
                value,
            });
        }
        std::mem::swap(&mut values, &mut scratch);
        t += dt_step;

        if let Some(policy) = &config.expansion {
            if values[sensor_idx] > sensor_threshold {
                let n = values.len();
                let width = (n - 1) as f64 * dx;
                let grow_nodes = ((policy.growth_factor * width) / dx).round() as usize;
                let new_n = n + grow_nodes.max(1);
                if new_n > config.max_nodes {
                    return Err(Error::ResourceLimit {
                        requested: new_n,
                        cap: config.max_nodes,
                    });
                }
                values.resize(new_n, 0.0);
                let t_now = t;
                exec::fill_indexed(&mut values[n..], |j| {
                    let x = x_left + (n + j) as f64 * dx;
                    advance_reaction(model, profile.eval(x), t_now)
                });
                scratch.resize(new_n, 0.0);
                expansion_times.push(t);
                let (idx, thr) = sensor_for(new_n);
                sensor_idx = idx;
                sensor_threshold = thr;
            }
        }

        while t >= next_snapshot - 1e-9 {
            record(t, &values, &mut snapshots, &mut trajectories);
            next_snapshot += config.snapshot_dt;
        }
    }

    if snapshots
        .last()
        .map(|s| (s.t - t).abs() > 1e-12)
        .unwrap_or(true)
    {
        record(t, &values, &mut snapshots, &mut trajectories);
    }

    // Conservative bulk invasion rate from the final third of the run.
    let t_cut = 2.0 / 3.0 * config.t_end;
    let mut gamma_hat: Option<f64> = None;
    for s in &snapshots {
        if s.t <= 0.0 || s.t < t_cut {
            continue;
        }
        let mut saturated_prefix = None;
        for (i, &v) in s.values.iter().enumerate() {
            if v >= 0.99 {
                saturated_prefix = Some(i);
            } else {
                break;
            }
        }
        if let Some(i) = saturated_prefix {
            let rate = s.x(i) / s.t;
            gamma_hat = Some(gamma_hat.map_or(rate, |g| g.min(rate)));
        }
    }

    Ok(RunResult {
        snapshots,
        trajectories,
        gamma_hat,
        expansion_times,
    })
}

//! Level-set positions and their kinematics.
//!
//! The observable of interest is the position of the level `lambda`:
//! crossings of `u(t, .) = lambda` extracted from grid states by linear
//! interpolation.  A trajectory of such positions is then summarised by two
//! fits over a time window,
//!
//! ```text
//!     ln x = q ln t + ln m        (power law,   exponent q),
//!     x    = c t + b              (linear law,  speed c),
//! ```
//!
//! whose exponents and goodness decide empirically whether a front spreads
//! ballistically or accelerates.

use crate::error::{Error, Result};
use crate::linfit::least_squares_line;
use serde::Serialize;
use std::io;

/// Leftmost and rightmost crossings of the level `lambda` in a grid state,
/// by scanning for sign changes of `u - lambda` and interpolating linearly
/// (grid nodes that hit the level exactly count as crossings).  `None` when
/// the state never touches the level.
pub fn extract_level(values: &[f64], x_left: f64, dx: f64, lambda: f64) -> Option<(f64, f64)> {
    let mut leftmost: Option<f64> = None;
    let mut rightmost: Option<f64> = None;
    let mut push = |x: f64| {
        leftmost = Some(leftmost.map_or(x, |l: f64| l.min(x)));
        rightmost = Some(rightmost.map_or(x, |r: f64| r.max(x)));
    };
    for i in 0..values.len() {
        let d = values[i] - lambda;
        if d == 0.0 {
            push(x_left + i as f64 * dx);
            continue;
        }
        if i + 1 < values.len() {
            let d_next = values[i + 1] - lambda;
            if d * d_next < 0.0 {
                let frac = d / (d - d_next);
                push(x_left + (i as f64 + frac) * dx);
            }
        }
    }
    match (leftmost, rightmost) {
        (Some(l), Some(r)) => Some((l, r)),
        _ => None,
    }
}

/// Time series of the crossings of one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelTrajectory {
    /// The tracked level, strictly inside `(0, 1)`.
    pub lambda: f64,
    /// `(t, positions)` samples; `None` where the state missed the level.
    pub samples: Vec<(f64, Option<(f64, f64)>)>,
}

/// Power-law and linear fits of a level trajectory over one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicsFit {
    /// Time window the fit used.
    pub window: (f64, f64),
    /// Power-law exponent in `x ~ m t^q`.
    pub q: f64,
    /// Power-law prefactor.
    pub m: f64,
    /// Slope of the linear fit `x ~ c t + b`.
    pub c_fit: f64,
    /// Coefficient of determination of the fit in log-log coordinates.
    pub r2_loglog: f64,
    /// Coefficient of determination of the linear fit.
    pub r2_linear: f64,
}

/// Fits the rightmost crossing positions of `traj` inside `window`.
/// Requires at least ten usable samples with positive time and position.
pub fn fit_growth(traj: &LevelTrajectory, window: (f64, f64)) -> Result<KinematicsFit> {
    let (t_lo, t_hi) = window;
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for &(t, pos) in &traj.samples {
        if t < t_lo || t > t_hi || t <= 0.0 {
            continue;
        }
        if let Some((_, right)) = pos {
            if right > 0.0 {
                ts.push(t);
                xs.push(right);
            }
        }
    }
    if ts.len() < 10 {
        return Err(Error::Fit(format!(
            "window [{t_lo}, {t_hi}] holds only {} usable samples of level {} (need 10)",
            ts.len(),
            traj.lambda
        )));
    }
    let log_t: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let log_x: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let (q, log_m, r2_loglog) = least_squares_line(&log_t, &log_x)
        .ok_or_else(|| Error::Fit("degenerate time samples in power-law fit".into()))?;
    let (c_fit, _, r2_linear) = least_squares_line(&ts, &xs)
        .ok_or_else(|| Error::Fit("degenerate time samples in linear fit".into()))?;
    Ok(KinematicsFit {
        window,
        q,
        m: log_m.exp(),
        c_fit,
        r2_loglog,
        r2_linear,
    })
}

/// What the data says about the spreading of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmpiricalRegime {
    /// Ballistic: position grows linearly in time.
    Linear,
    /// Superlinear power-law growth.
    Accelerating,
    /// Neither description fits cleanly.
    Indeterminate,
}

/// Decision thresholds for [`detect_regime_empirical`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeThresholds {
    /// Largest power-law exponent still considered linear.
    pub linear_max_q: f64,
    /// Smallest exponent accepted as genuine acceleration.
    pub accel_min_q: f64,
    /// Minimum goodness of fit demanded from the matching description.
    pub min_r2: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            linear_max_q: 1.15,
            accel_min_q: 1.3,
            min_r2: 0.98,
        }
    }
}

/// Classifies a trajectory over its final decade `[t_max/10, t_max]`.
/// Needs data out to at least `t = 10`.
pub fn detect_regime_empirical(
    traj: &LevelTrajectory,
    thresholds: &RegimeThresholds,
) -> Result<(EmpiricalRegime, KinematicsFit)> {
    let t_max = traj
        .samples
        .iter()
        .filter(|(_, pos)| pos.is_some())
        .map(|&(t, _)| t)
        .fold(f64::NEG_INFINITY, f64::max);
    if !t_max.is_finite() || t_max < 10.0 {
        return Err(Error::Fit(format!(
            "trajectory of level {} reaches only t = {t_max}; need t >= 10 for a decade fit",
            traj.lambda
        )));
    }
    let fit = fit_growth(traj, (t_max / 10.0, t_max))?;
    let regime = if fit.r2_linear >= thresholds.min_r2 && fit.q <= thresholds.linear_max_q {
        EmpiricalRegime::Linear
    } else if fit.r2_loglog >= thresholds.min_r2 && fit.q >= thresholds.accel_min_q {
        EmpiricalRegime::Accelerating
    } else {
        EmpiricalRegime::Indeterminate
    };
    Ok((regime, fit))
}

/// Writes trajectories as CSV with full float precision.  Columns are
/// `lambda,t,x_left,x_right`; crossings that do not exist leave their fields
/// empty.
pub fn write_csv<W: io::Write>(mut out: W, trajectories: &[LevelTrajectory]) -> io::Result<()> {
    writeln!(out, "lambda,t,x_left,x_right")?;
    for traj in trajectories {
        for &(t, pos) in &traj.samples {
            match pos {
                Some((l, r)) => writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e}",
                    traj.lambda, t, l, r
                )?,
                None => writeln!(out, "{:.16e},{:.16e},,", traj.lambda, t)?,
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn tent_state_yields_two_crossings() {
        // Tent over x = 0..8 peaking at 0.8: the 0.4-level is hit exactly at
        // the nodes x = 2 and x = 6.
        let values = vec![0.0, 0.2, 0.4, 0.6, 0.8, 0.6, 0.4, 0.2, 0.0];
        let (l, r) = extract_level(&values, 0.0, 1.0, 0.4).unwrap();
        assert_close(l, 2.0, 1e-15);
        assert_close(r, 6.0, 1e-15);
    }

    #[test]
    fn crossings_interpolate_between_nodes() {
        let values = vec![1.0, 0.75, 0.25, 0.0];
        let (l, r) = extract_level(&values, 0.0, 1.0, 0.5).unwrap();
        assert_close(l, 1.5, 1e-15);
        assert_close(r, 1.5, 1e-15);
    }

    #[test]
    fn missing_levels_return_none() {
        assert_eq!(extract_level(&[0.9, 0.8, 0.7], 0.0, 1.0, 0.5), None);
        assert_eq!(extract_level(&[0.1, 0.2, 0.3], 0.0, 1.0, 0.5), None);
        assert_eq!(extract_level(&[], 0.0, 1.0, 0.5), None);
    }

    #[test]
    fn exact_node_hit_is_reported_at_the_node() {
        let values = vec![1.0, 0.5, 0.0];
        let (l, r) = extract_level(&values, 10.0, 0.5, 0.5).unwrap();
        assert_close(l, 10.5, 1e-15);
        assert_close(r, 10.5, 1e-15);
    }

    fn synthetic(positions: impl Fn(f64) -> f64, n: usize, t_max: f64) -> LevelTrajectory {
        LevelTrajectory {
            lambda: 0.3,
            samples: (1..=n)
                .map(|i| {
                    let t = t_max * i as f64 / n as f64;
                    (t, Some((0.0, positions(t))))
                })
                .collect(),
        }
    }

    #[test]
    fn power_law_fit_recovers_exponent_and_prefactor() {
        let traj = synthetic(|t| 2.0 * t.powf(1.5), 100, 100.0);
        let fit = fit_growth(&traj, (1.0, 100.0)).unwrap();
        assert_close(fit.q, 1.5, 1e-10);
        assert_close(fit.m, 2.0, 1e-9);
        assert!(fit.r2_loglog > 1.0 - 1e-12);
    }

    #[test]
    fn linear_fit_recovers_speed() {
        let traj = synthetic(|t| 3.0 * t + 5.0, 100, 100.0);
        let fit = fit_growth(&traj, (1.0, 100.0)).unwrap();
        assert_close(fit.c_fit, 3.0, 1e-10);
        assert!(fit.r2_linear > 1.0 - 1e-12);
    }

    #[test]
    fn sparse_windows_are_rejected() {
        let traj = synthetic(|t| t, 100, 100.0);
        assert!(matches!(fit_growth(&traj, (98.0, 100.0)), Err(Error::Fit(_))));
    }

    #[test]
    fn regime_detection_separates_linear_from_accelerating() {
        let lin = synthetic(|t| 2.4 * t + 8.0, 200, 120.0);
        let (regime, fit) = detect_regime_empirical(&lin, &RegimeThresholds::default()).unwrap();
        assert_eq!(regime, EmpiricalRegime::Linear, "fit {fit:?}");

        let acc = synthetic(|t| 0.5 * t * t, 200, 120.0);
        let (regime, fit) = detect_regime_empirical(&acc, &RegimeThresholds::default()).unwrap();
        assert_eq!(regime, EmpiricalRegime::Accelerating, "fit {fit:?}");
    }

    #[test]
    fn short_trajectories_cannot_be_classified() {
        let traj = synthetic(|t| t, 50, 8.0);
        assert!(matches!(
            detect_regime_empirical(&traj, &RegimeThresholds::default()),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn spatial_rescaling_scales_speed_but_not_exponent() {
        let traj = synthetic(|t| 1.7 * t.powf(1.8) + 3.0, 150, 90.0);
        let doubled = LevelTrajectory {
            lambda: traj.lambda,
            samples: traj
                .samples
                .iter()
                .map(|&(t, pos)| (t, pos.map(|(l, r)| (2.0 * l, 2.0 * r))))
                .collect(),
        };
        let w = (9.0, 90.0);
        let base = fit_growth(&traj, w).unwrap();
        let scaled = fit_growth(&doubled, w).unwrap();
        assert_close(scaled.q, base.q, 1e-12);
        assert_close(scaled.c_fit, 2.0 * base.c_fit, 1e-9);
        assert_close(scaled.m, 2.0 * base.m, 1e-9 * base.m.abs());
        assert_close(scaled.r2_loglog, base.r2_loglog, 1e-12);
    }

    #[test]
    fn csv_round_trips_values_and_gaps() {
        let traj = LevelTrajectory {
            lambda: 0.5,
            samples: vec![(1.0, Some((2.0, 4.0))), (2.0, None)],
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[traj]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("lambda,t,x_left,x_right"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("5.0000000000000000e-1,1.0000000000000000e0,"));
        let gap_row = lines.next().unwrap();
        assert!(gap_row.ends_with(",,"), "gap row was {gap_row}");
        assert_eq!(lines.next(), None);
    }
}

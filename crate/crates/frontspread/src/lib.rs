//! Simulation and certification toolkit for one-dimensional fronts driven by
//! `u_t = u_xx + f(u)` with a degenerate monostable reaction (`f(s) ~ r s^beta`
//! near 0, `beta > 1`) and front-like initial data with a heavy right tail.
//!
//! The crate has three layers:
//!
//! * [`model`] and [`solver`] describe a problem (reaction nonlinearity,
//!   initial profile) and integrate it on an expanding grid with a monotone
//!   explicit scheme;
//! * [`levelsets`] extracts level-set trajectories from snapshots and fits
//!   their growth, classifying runs as linear or accelerating empirically;
//! * [`theory`] and [`certificates`] construct the comparison objects that
//!   pin the front location a priori — traveling power-tail supersolutions,
//!   transported reaction profiles, and self-sharpening bumps — and verify
//!   their defining differential inequalities numerically, including against
//!   simulated states.
//!
//! Heavy loops are data-parallel via `rayon` under the default `parallel`
//! feature; a sequential fallback with bit-identical results is always
//! compiled (see `step` vs `step_sequential` and the accompanying benches).

mod error;
mod exec;
mod linfit;

pub mod certificates;
pub mod levelsets;
pub mod model;
pub mod solver;
pub mod theory;

pub use error::{Error, Result};

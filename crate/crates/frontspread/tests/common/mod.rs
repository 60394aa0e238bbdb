//! Shared fixtures for the integration suites.
//!
//! The accelerating benchmark problem (degenerate reaction `s^1.5 (1 - s)`,
//! exact `1/x` tail) is used by several checks; its certified constants are
//! cheap but the long simulation is not, so the two are cached separately and
//! built at most once per test binary.  Each test binary uses its own subset
//! of these fixtures, so unused-item lints are silenced.
#![allow(dead_code)]

use std::sync::OnceLock;
use std::time::Instant;

use frontspread::certificates::{global_supersolution_params, GlobalParams};
use frontspread::model::{InitialProfile, NonlinearityModel};
use frontspread::solver::{run, RunResult, SolverConfig};
use frontspread::theory::{bump_constants, BumpConstants};

/// Level tracked in the accelerating benchmark.
pub const ACCEL_LEVEL: f64 = 0.1;

/// Rate margin used for the accelerating benchmark's envelopes and
/// certificates (one fifth of the reaction rate).
pub const ACCEL_EPSILON: f64 = 0.2;

/// Time horizon of the accelerating benchmark.
pub const ACCEL_T_END: f64 = 200.0;

/// Grid spacing of the accelerating benchmark.
pub const ACCEL_DX: f64 = 0.1;

/// The accelerating benchmark problem and its certified objects.
pub struct AccelProblem {
    pub model: NonlinearityModel,
    pub profile: InitialProfile,
    pub constants: BumpConstants,
    pub params: GlobalParams,
}

/// Problem data only (no simulation): reaction `s^1.5 (1 - s)`, tail exactly
/// `1/x` from just past 1, so the datum is `min(1, 1/x)` up to a hairline
/// glue interval.
pub fn accel_problem() -> &'static AccelProblem {
    static CELL: OnceLock<AccelProblem> = OnceLock::new();
    CELL.get_or_init(|| {
        let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
        let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 1.0 + 1e-7, 1.0).unwrap();
        let constants = bump_constants(&model, &profile, ACCEL_EPSILON).unwrap();
        let params = global_supersolution_params(&model, &profile, ACCEL_EPSILON).unwrap();
        AccelProblem {
            model,
            profile,
            constants,
            params,
        }
    })
}

/// Finished simulation of the accelerating benchmark (long run; built once).
pub fn accel_run() -> &'static RunResult {
    static CELL: OnceLock<RunResult> = OnceLock::new();
    CELL.get_or_init(|| {
        let p = accel_problem();
        let cfg = SolverConfig {
            dx: ACCEL_DX,
            t_end: ACCEL_T_END,
            snapshot_dt: 2.0,
            levels: vec![ACCEL_LEVEL],
            ..SolverConfig::default()
        };
        let started = Instant::now();
        let result = run(&p.model, &p.profile, &cfg).unwrap();
        eprintln!(
            "accelerating benchmark: {} snapshots, {} final nodes, {:.1?}",
            result.snapshots.len(),
            result.snapshots.last().unwrap().values.len(),
            started.elapsed()
        );
        result
    })
}

/// Prints the standard acceptance verdict line and passes the flag through.
pub fn verdict(number: u32, name: &str, pass: bool) -> bool {
    println!(
        "ACCEPTANCE {number} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

//! Problem data: reaction nonlinearities and front-like initial profiles.
//!
//! The equation under study is `u_t = u_xx + f(u)` on the line.  The reaction
//! `f` is monostable and degenerate at the origin: `f(0) = f(1) = 0`,
//! `f > 0` on `(0,1)`, and `f'(0) = 0` (a weak Allee effect).  The canonical
//! family is
//!
//! ```text
//!     f(s) = r * s^beta * (1 - s^delta),        r > 0, beta > 1, delta > 0,
//! ```
//!
//! and every model carries two-sided power bounds used by the certified
//! comparison constructions:
//!
//! ```text
//!     f(s) >= r * s^beta * (1 - s^delta)   on [0, s0],
//!     f(s) <= r_bar * s^beta               on [0, 1].
//! ```
//!
//! Initial profiles are front-like: a plateau at `eta` on the far left, a
//! short monotone glue, and a heavy (or not) tail for `x >= x0`.  The tail
//! family determines whether level sets of the solution spread linearly or
//! accelerate, which is the dichotomy the rest of the crate quantifies.

use crate::error::{Error, Result};
use crate::linfit::least_squares_line;
use serde::Serialize;

/// Tolerance used when checking exact identities (`f(0) = 0`, endpoint
/// continuity) in floating point.
const EXACT_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// fast powers
// ---------------------------------------------------------------------------

/// Precompiled power `s -> s^p` with fast paths for the exponents that occur
/// in practice.  The solver evaluates the reaction once per node per step, so
/// avoiding `powf` for common exponents is a large constant-factor win.
#[derive(Debug, Clone, Copy, PartialEq)]
enum PowKind {
    One,
    Sqrt,
    ThreeHalves,
    Square,
    Cube,
    Int(i32),
    General(f64),
}

impl PowKind {
    fn for_exponent(p: f64) -> Self {
        if (p - 1.0).abs() < EXACT_TOL {
            PowKind::One
        } else if (p - 0.5).abs() < EXACT_TOL {
            PowKind::Sqrt
        } else if (p - 1.5).abs() < EXACT_TOL {
            PowKind::ThreeHalves
        } else if (p - 2.0).abs() < EXACT_TOL {
            PowKind::Square
        } else if (p - 3.0).abs() < EXACT_TOL {
            PowKind::Cube
        } else if p.fract() == 0.0 && (1.0..=64.0).contains(&p) {
            PowKind::Int(p as i32)
        } else {
            PowKind::General(p)
        }
    }

    #[inline(always)]
    fn apply(self, s: f64) -> f64 {
        match self {
            PowKind::One => s,
            PowKind::Sqrt => s.sqrt(),
            PowKind::ThreeHalves => s * s.sqrt(),
            PowKind::Square => s * s,
            PowKind::Cube => s * s * s,
            PowKind::Int(k) => s.powi(k),
            PowKind::General(p) => s.powf(p),
        }
    }
}

// ---------------------------------------------------------------------------
// nonlinearity
// ---------------------------------------------------------------------------

/// How the reaction is represented.
#[derive(Debug, Clone, PartialEq)]
enum ReactionKind {
    /// `f(s) = r * s^beta * (1 - s^delta)`.
    Canonical,
    /// Sampled values on `[0,1]`, evaluated by monotone piecewise-linear
    /// interpolation.  Samples are strictly increasing in `s`.
    Tabulated { s: Vec<f64>, f: Vec<f64> },
}

/// A monostable degenerate reaction term together with its declared power
/// bounds.  Immutable after construction; cheap to clone and safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityModel {
    /// Lower-bound rate in `f(s) >= r s^beta (1 - s^delta)` on `[0, s0]`.
    pub r: f64,
    /// Degeneracy exponent at the origin; the interesting regime is `beta > 1`.
    pub beta: f64,
    /// Saturation exponent in the lower bound.
    pub delta: f64,
    /// Right end of the interval on which the lower bound is declared.
    pub s0: f64,
    /// Upper-bound rate in `f(s) <= r_bar s^beta` on `[0, 1]`.
    pub r_bar: f64,
    kind: ReactionKind,
    pow_beta: PowKind,
    pow_delta: PowKind,
}

impl NonlinearityModel {
    /// Canonical reaction `f(s) = r s^beta (1 - s^delta)` with the tight
    /// default bounds `s0 = 1/2` and `r_bar = r`.
    ///
    /// `r = 0` is admitted as a degenerate test mode (`f == 0`, pure
    /// diffusion); [`NonlinearityModel::validate`] will flag it as violating
    /// positivity, but the solver accepts it.
    pub fn canonical(r: f64, beta: f64, delta: f64) -> Result<Self> {
        Self::canonical_with_bounds(r, beta, delta, 0.5, r)
    }

    /// Canonical reaction with explicitly declared `s0` and `r_bar`.
    pub fn canonical_with_bounds(r: f64, beta: f64, delta: f64, s0: f64, r_bar: f64) -> Result<Self> {
        check_common_params(r, beta, delta, s0, r_bar)?;
        Ok(Self {
            r,
            beta,
            delta,
            s0,
            r_bar,
            kind: ReactionKind::Canonical,
            pow_beta: PowKind::for_exponent(beta),
            pow_delta: PowKind::for_exponent(delta),
        })
    }

    /// Tabulated reaction from samples `(s_i, f_i)` with `s` strictly
    /// increasing, covering `[0, 1]`.  The declared `(r, beta, delta, s0,
    /// r_bar)` bounds are checked by [`NonlinearityModel::validate`], not at
    /// construction.
    pub fn tabulated(
        samples: &[(f64, f64)],
        r: f64,
        beta: f64,
        delta: f64,
        s0: f64,
        r_bar: f64,
    ) -> Result<Self> {
        check_common_params(r, beta, delta, s0, r_bar)?;
        if samples.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated reaction needs at least two samples".into(),
            ));
        }
        let s: Vec<f64> = samples.iter().map(|p| p.0).collect();
        let f: Vec<f64> = samples.iter().map(|p| p.1).collect();
        if !s.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated reaction abscissae must be strictly increasing".into(),
            ));
        }
        if s[0] > EXACT_TOL || s[s.len() - 1] < 1.0 - EXACT_TOL {
            return Err(Error::InvalidParameter(
                "tabulated reaction samples must cover [0, 1]".into(),
            ));
        }
        if !f.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(
                "tabulated reaction values must be finite".into(),
            ));
        }
        Ok(Self {
            r,
            beta,
            delta,
            s0,
            r_bar,
            kind: ReactionKind::Tabulated { s, f },
            pow_beta: PowKind::for_exponent(beta),
            pow_delta: PowKind::for_exponent(delta),
        })
    }

    /// Whether this is the canonical closed-form family.
    pub fn is_canonical(&self) -> bool {
        matches!(self.kind, ReactionKind::Canonical)
    }

    /// Evaluates `f(s)`.  Errors when `s` lies outside `[0, 1]`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!(
                "reaction evaluated at s = {s} outside [0, 1]"
            )));
        }
        Ok(self.eval_unchecked(s))
    }

    /// Evaluates `f` with the argument clamped to `[0, 1]`.  Used by the
    /// solver, whose intermediate quantities may leave the interval by
    /// rounding, and by ODE sub-integrators whose stages may overshoot.
    #[inline(always)]
    pub(crate) fn eval_clamped(&self, s: f64) -> f64 {
        self.eval_unchecked(s.clamp(0.0, 1.0))
    }

    #[inline(always)]
    fn eval_unchecked(&self, s: f64) -> f64 {
        match &self.kind {
            ReactionKind::Canonical => {
                self.r * self.pow_beta.apply(s) * (1.0 - self.pow_delta.apply(s))
            }
            ReactionKind::Tabulated { s: xs, f: ys } => {
                // Clamp-free: callers guarantee s in [xs[0], xs[last]] up to
                // the construction tolerance.
                let idx = xs.partition_point(|&v| v < s);
                if idx == 0 {
                    return ys[0];
                }
                if idx == xs.len() {
                    return ys[ys.len() - 1];
                }
                let (x0, x1) = (xs[idx - 1], xs[idx]);
                let (y0, y1) = (ys[idx - 1], ys[idx]);
                y0 + (y1 - y0) * (s - x0) / (x1 - x0)
            }
        }
    }

    /// The lower-bound envelope `r s^beta (1 - s^delta)`.
    #[inline]
    pub fn lower_bound(&self, s: f64) -> f64 {
        self.r * self.pow_beta.apply(s) * (1.0 - self.pow_delta.apply(s))
    }

    /// The upper-bound envelope `r_bar s^beta`.
    #[inline]
    pub fn upper_bound(&self, s: f64) -> f64 {
        self.r_bar * self.pow_beta.apply(s)
    }

    /// Checks every structural invariant on a sample grid and reports each
    /// one individually; failures are reported, not thrown.  `samples` is the
    /// number of interior sample points and must be at least 100.
    ///
    /// For the canonical family the report also carries the tight upper rate
    /// `sup_{s in (0,1]} f(s)/s^beta`, which the supremum at `s -> 0` makes
    /// exactly `r`.
    pub fn validate(&self, samples: usize) -> Result<ValidationReport> {
        if samples < 100 {
            return Err(Error::InvalidParameter(format!(
                "validation needs at least 100 samples, got {samples}"
            )));
        }
        let mut checks = Vec::new();

        // f(0) = 0 and f(1) = 0.
        let f0 = self.eval_unchecked(0.0);
        checks.push(CheckResult::exact("f(0) = 0", f0.abs() <= EXACT_TOL, 0.0, f0));
        let f1 = self.eval_unchecked(1.0);
        checks.push(CheckResult::exact("f(1) = 0", f1.abs() <= EXACT_TOL, 1.0, f1));

        // Strict positivity on the open interval (skipped for the pure
        // diffusion test mode r = 0 only in the sense that it simply fails).
        let mut positivity = CheckResult::pass("f > 0 on (0, 1)");
        for i in 1..=samples {
            let s = i as f64 / (samples + 1) as f64;
            let v = self.eval_unchecked(s);
            if v <= 0.0 {
                positivity = CheckResult::fail(
                    "f > 0 on (0, 1)",
                    s,
                    format!("f({s}) = {v} is not positive"),
                );
                break;
            }
        }
        checks.push(positivity);

        // Degeneracy at the origin.
        checks.push(self.check_flat_at_origin());

        // Lower bound on [0, s0].
        let mut lower = CheckResult::pass("f >= r s^beta (1 - s^delta) on [0, s0]");
        for i in 0..=samples {
            let s = self.s0 * i as f64 / samples as f64;
            let v = self.eval_unchecked(s);
            let bound = self.lower_bound(s);
            if v < bound - EXACT_TOL {
                lower = CheckResult::fail(
                    "f >= r s^beta (1 - s^delta) on [0, s0]",
                    s,
                    format!("f({s}) = {v} < {bound}"),
                );
                break;
            }
        }
        checks.push(lower);

        // Upper bound on [0, 1].
        let mut upper = CheckResult::pass("f <= r_bar s^beta on [0, 1]");
        for i in 0..=samples {
            let s = i as f64 / samples as f64;
            let v = self.eval_unchecked(s);
            let bound = self.upper_bound(s);
            if v > bound + EXACT_TOL {
                upper = CheckResult::fail(
                    "f <= r_bar s^beta on [0, 1]",
                    s,
                    format!("f({s}) = {v} > {bound}"),
                );
                break;
            }
        }
        checks.push(upper);

        let tight_r_bar = match &self.kind {
            // sup f(s)/s^beta = r sup (1 - s^delta) over (0,1], attained in
            // the limit s -> 0.
            ReactionKind::Canonical => Some(self.r),
            ReactionKind::Tabulated { .. } => {
                let mut sup: f64 = 0.0;
                for i in 1..=samples {
                    let s = i as f64 / (samples + 1) as f64;
                    let denom = self.pow_beta.apply(s);
                    if denom > 0.0 {
                        sup = sup.max(self.eval_unchecked(s) / denom);
                    }
                }
                Some(sup)
            }
        };

        let valid = checks.iter().all(|c| c.pass);
        Ok(ValidationReport {
            checks,
            tight_r_bar,
            valid,
        })
    }

    /// `f'(0) = 0` check.  Closed form for the canonical family; a one-sided
    /// difference quotient at `s = 1e-4` (threshold `1e-2`) for tables, whose
    /// resolution near the origin cannot support a smaller probe.
    fn check_flat_at_origin(&self) -> CheckResult {
        const NAME: &str = "f'(0) = 0";
        match &self.kind {
            ReactionKind::Canonical => {
                if self.r == 0.0 || self.beta > 1.0 {
                    CheckResult::pass(NAME)
                } else {
                    let slope = if (self.beta - 1.0).abs() < EXACT_TOL {
                        self.r
                    } else {
                        f64::INFINITY
                    };
                    CheckResult::fail(NAME, 0.0, format!("f'(0) = {slope} ≠ 0"))
                }
            }
            ReactionKind::Tabulated { .. } => {
                let probe = 1e-4;
                let quotient = (self.eval_unchecked(probe) - self.eval_unchecked(0.0)) / probe;
                if quotient.abs() < 1e-2 {
                    CheckResult::pass(NAME)
                } else {
                    CheckResult::fail(NAME, probe, format!("f'(0) = {quotient} ≠ 0"))
                }
            }
        }
    }
}

fn check_common_params(r: f64, beta: f64, delta: f64, s0: f64, r_bar: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParameter(format!("rate r = {r} must be >= 0")));
    }
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    if !s0.is_finite() || !(0.0..1.0).contains(&s0) || s0 == 0.0 {
        return Err(Error::InvalidParameter(format!("s0 = {s0} must lie in (0, 1)")));
    }
    if !r_bar.is_finite() || r_bar < 0.0 {
        return Err(Error::InvalidParameter(format!("r_bar = {r_bar} must be >= 0")));
    }
    Ok(())
}

/// Outcome of a single validation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    /// Human-readable statement of the invariant.
    pub name: String,
    /// Whether the invariant held on the sample grid.
    pub pass: bool,
    /// Witness abscissa for a failure.
    pub witness: Option<f64>,
    /// Diagnostic detail (empty on pass).
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str) -> Self {
        Self {
            name: name.into(),
            pass: true,
            witness: None,
            detail: String::new(),
        }
    }
    fn fail(name: &str, witness: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            pass: false,
            witness: Some(witness),
            detail,
        }
    }
    fn exact(name: &str, ok: bool, witness: f64, value: f64) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, witness, format!("{name} violated: value {value} ≠ 0"))
        }
    }
}

/// Per-invariant validation report for a reaction model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// One entry per structural invariant, in a fixed order.
    pub checks: Vec<CheckResult>,
    /// Tight admissible `r_bar` (canonical: exactly `r`; tabulated: sampled
    /// supremum of `f(s)/s^beta`).
    pub tight_r_bar: Option<f64>,
    /// Conjunction of all checks.
    pub valid: bool,
}

// ---------------------------------------------------------------------------
// initial profiles
// ---------------------------------------------------------------------------

/// Tail family of a front-like initial profile, valid for `x >= x0`.
#[derive(Debug, Clone, PartialEq)]
enum Tail {
    /// `u0(x) = C / x^alpha`.
    Algebraic { alpha: f64 },
    /// `u0(x) = C exp(-a x^b)` with `0 < b < 1`.
    StretchedExponential { a: f64, b: f64 },
    /// `u0(x) = C exp(-a x / ln x)`; requires `x0 >= e` so the tail is
    /// non-increasing from its start.
    LogLinear { a: f64 },
    /// `u0(x) = C / (ln x)^b`.
    LogAlgebraic { b: f64 },
    /// Sampled values, interpolated linearly and clamped at the ends.
    Tabulated { xs: Vec<f64>, us: Vec<f64> },
}

/// Coarse asymptotic class of a tail, relative to the algebraic family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailClass {
    /// Decays faster than every `C / x^alpha` (e.g. stretched exponential).
    LighterThanAlgebraic,
    /// Behaves like `C / x^alpha`; carries the (possibly fitted) exponent.
    Algebraic {
        /// Decay exponent.
        alpha: f64,
    },
    /// Decays slower than every `C / x^alpha` (e.g. inverse powers of `ln x`).
    HeavierThanAlgebraic,
}

/// Front-like initial datum: plateau `eta` on the left of `x_glue = x0 - 1`,
/// a monotone cubic glue on `[x_glue, x0]`, and the tail for `x >= x0`.
///
/// Values satisfy `0 < u0 <= 1` (built-in kinds) and the tail is
/// non-increasing.  Built-in kinds are twice continuously differentiable on
/// the tail, with closed-form derivatives exposed for the certified
/// comparison constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    /// Lower tail amplitude: the evaluated tail itself.
    pub c: f64,
    /// Upper tail amplitude; `c = c_bar` is the tail-exact mode in which the
    /// two-sided comparison hypotheses hold with equality.
    pub c_bar: f64,
    /// Tail start; tail formulas apply for `x >= x0 > 1`.
    pub x0: f64,
    /// Plateau value on `(-inf, x_glue]`, in `(0, 1]`.
    pub eta: f64,
    tail: Tail,
    /// Hermite data for the glue interval `[x0 - 1, x0]`.
    glue_value_right: f64,
    glue_slope_right: f64,
}

impl InitialProfile {
    /// Algebraic tail `C / x^alpha`.  Requires `0 < C <= C_bar`,
    /// `C_bar / x0^alpha <= 1`, `alpha > 0`, `x0 > 1`, `eta in (0, 1]`.
    pub fn algebraic(c: f64, c_bar: f64, alpha: f64, x0: f64, eta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
        }
        if c <= 0.0 || c_bar < c {
            return Err(Error::InvalidParameter(format!(
                "tail amplitudes need 0 < C <= C_bar, got C = {c}, C_bar = {c_bar}"
            )));
        }
        if c_bar / x0.powf(alpha) > 1.0 + EXACT_TOL {
            return Err(Error::InvalidParameter(format!(
                "C_bar / x0^alpha = {} exceeds 1; the profile would leave [0, 1]",
                c_bar / x0.powf(alpha)
            )));
        }
        Self::with_tail(c, c_bar, x0, eta, Tail::Algebraic { alpha })
    }

    /// Stretched-exponential tail `C exp(-a x^b)`, `0 < b < 1`.
    pub fn stretched_exponential(c: f64, a: f64, b: f64, x0: f64, eta: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("a = {a} must be positive")));
        }
        if !(b.is_finite() && 0.0 < b && b < 1.0) {
            return Err(Error::InvalidParameter(format!("b = {b} must lie in (0, 1)")));
        }
        Self::with_tail(c, c, x0, eta, Tail::StretchedExponential { a, b })
    }

    /// Log-linear tail `C exp(-a x / ln x)`.  Requires `x0 >= e` so that the
    /// tail is non-increasing from its start.
    pub fn log_linear(c: f64, a: f64, x0: f64, eta: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("a = {a} must be positive")));
        }
        if x0 < std::f64::consts::E - EXACT_TOL {
            return Err(Error::InvalidParameter(format!(
                "log-linear tail requires x0 >= e, got x0 = {x0}"
            )));
        }
        Self::with_tail(c, c, x0, eta, Tail::LogLinear { a })
    }

    /// Log-algebraic tail `C / (ln x)^b`, heavier than every algebraic tail.
    pub fn log_algebraic(c: f64, b: f64, x0: f64, eta: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!("b = {b} must be positive")));
        }
        Self::with_tail(c, c, x0, eta, Tail::LogAlgebraic { b })
    }

    /// Sampled profile.  `xs` strictly increasing; values in `[0, 1]`.
    /// Evaluation clamps to the end values outside the sampled range, so the
    /// plateau is `us[0]`.  `x0` marks where the tail is considered to start
    /// for classification purposes.
    pub fn tabulated(xs: Vec<f64>, us: Vec<f64>, x0: f64) -> Result<Self> {
        if xs.len() < 2 || xs.len() != us.len() {
            return Err(Error::InvalidParameter(
                "tabulated profile needs matching xs/us with at least two samples".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated profile abscissae must be strictly increasing".into(),
            ));
        }
        if !us.iter().all(|u| u.is_finite() && (0.0..=1.0).contains(u)) {
            return Err(Error::InvalidParameter(
                "tabulated profile values must lie in [0, 1]".into(),
            ));
        }
        let eta = us[0];
        Ok(Self {
            c: 1.0,
            c_bar: 1.0,
            x0,
            eta,
            glue_value_right: eta,
            glue_slope_right: 0.0,
            tail: Tail::Tabulated { xs, us },
        })
    }

    fn with_tail(c: f64, c_bar: f64, x0: f64, eta: f64, tail: Tail) -> Result<Self> {
        if !(x0.is_finite() && x0 > 1.0) {
            return Err(Error::InvalidParameter(format!("x0 = {x0} must exceed 1")));
        }
        if !(eta.is_finite() && 0.0 < eta && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta = {eta} must lie in (0, 1]")));
        }
        let mut profile = Self {
            c,
            c_bar,
            x0,
            eta,
            tail,
            glue_value_right: 0.0,
            glue_slope_right: 0.0,
        };
        let v0 = profile.tail_value(x0);
        if !(v0.is_finite() && v0 > 0.0 && v0 <= 1.0 + EXACT_TOL) {
            return Err(Error::InvalidParameter(format!(
                "tail value at x0 is {v0}, outside (0, 1]"
            )));
        }
        profile.glue_value_right = v0.min(1.0);
        profile.glue_slope_right = profile.monotone_glue_slope(v0.min(1.0));
        Ok(profile)
    }

    /// Right-end slope for the glue cubic.  The cubic matches values and
    /// one-sided slopes (plateau slope 0 on the left, tail slope on the
    /// right); when the raw tail slope would break monotonicity of the cubic
    /// it is limited to the classical `3 * secant` bound, and when the two
    /// endpoint values coincide (e.g. `eta = 1` with a tail starting exactly
    /// at 1) the glue degenerates to a constant.
    fn monotone_glue_slope(&self, value_right: f64) -> f64 {
        let secant = value_right - self.eta; // glue interval has unit length
        if secant.abs() <= EXACT_TOL {
            return 0.0;
        }
        let raw = self.tail_first_derivative_raw(self.x0);
        if raw * secant < 0.0 {
            0.0
        } else if raw.abs() > 3.0 * secant.abs() {
            3.0 * secant
        } else {
            raw
        }
    }

    /// Left end of the glue interval, `x0 - 1`.
    pub fn x_glue(&self) -> f64 {
        self.x0 - 1.0
    }

    /// Tail decay exponent, for algebraic tails.
    pub fn alpha(&self) -> Option<f64> {
        match self.tail {
            Tail::Algebraic { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// Whether the profile is a sampled table (no closed-form derivatives).
    pub fn is_tabulated(&self) -> bool {
        matches!(self.tail, Tail::Tabulated { .. })
    }

    /// Evaluates `u0(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        if let Tail::Tabulated { xs, us } = &self.tail {
            let idx = xs.partition_point(|&v| v < x);
            if idx == 0 {
                return us[0];
            }
            if idx == xs.len() {
                return us[us.len() - 1];
            }
            let (x0, x1) = (xs[idx - 1], xs[idx]);
            let (y0, y1) = (us[idx - 1], us[idx]);
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
        let x_glue = self.x_glue();
        if x <= x_glue {
            self.eta
        } else if x < self.x0 {
            // Cubic Hermite on the unit interval [x_glue, x0].
            let s = x - x_glue;
            let s2 = s * s;
            let s3 = s2 * s;
            let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
            let h01 = -2.0 * s3 + 3.0 * s2;
            let h11 = s3 - s2;
            h00 * self.eta + h01 * self.glue_value_right + h11 * self.glue_slope_right
        } else {
            self.tail_value(x)
        }
    }

    fn tail_value(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Algebraic { alpha } => self.c / x.powf(*alpha),
            Tail::StretchedExponential { a, b } => self.c * (-a * x.powf(*b)).exp(),
            Tail::LogLinear { a } => self.c * (-a * x / x.ln()).exp(),
            Tail::LogAlgebraic { b } => self.c / x.ln().powf(*b),
            Tail::Tabulated { .. } => unreachable!("tabulated handled in eval"),
        }
    }

    fn tail_first_derivative_raw(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Algebraic { alpha } => -alpha * self.c * x.powf(-alpha - 1.0),
            Tail::StretchedExponential { a, b } => {
                -a * b * x.powf(b - 1.0) * self.tail_value(x)
            }
            Tail::LogLinear { a } => {
                let ln = x.ln();
                let phi_prime = a * (ln - 1.0) / (ln * ln);
                -phi_prime * self.tail_value(x)
            }
            Tail::LogAlgebraic { b } => {
                let ln = x.ln();
                -b * self.c * ln.powf(-b - 1.0) / x
            }
            Tail::Tabulated { .. } => f64::NAN,
        }
    }

    /// Closed-form `u0'(x)` on the tail (`x >= x0`).  Unsupported for
    /// tabulated profiles.
    pub fn tail_first_derivative(&self, x: f64) -> Result<f64> {
        self.require_tail_point(x)?;
        Ok(self.tail_first_derivative_raw(x))
    }

    /// Closed-form `u0''(x)` on the tail (`x >= x0`).  Unsupported for
    /// tabulated profiles.
    pub fn tail_second_derivative(&self, x: f64) -> Result<f64> {
        self.require_tail_point(x)?;
        Ok(match &self.tail {
            Tail::Algebraic { alpha } => {
                alpha * (alpha + 1.0) * self.c * x.powf(-alpha - 2.0)
            }
            Tail::StretchedExponential { a, b } => {
                let abx = a * b * x.powf(b - 1.0);
                let u = self.tail_value(x);
                (abx * abx - a * b * (b - 1.0) * x.powf(b - 2.0)) * u
            }
            Tail::LogLinear { a } => {
                let ln = x.ln();
                let phi_prime = a * (ln - 1.0) / (ln * ln);
                let phi_second = a * (2.0 - ln) / (x * ln * ln * ln);
                let u = self.tail_value(x);
                (phi_prime * phi_prime - phi_second) * u
            }
            Tail::LogAlgebraic { b } => {
                let ln = x.ln();
                self.c * b / (x * x) * ((b + 1.0) * ln.powf(-b - 2.0) + ln.powf(-b - 1.0))
            }
            Tail::Tabulated { .. } => unreachable!("require_tail_point rejects tables"),
        })
    }

    fn require_tail_point(&self, x: f64) -> Result<()> {
        if self.is_tabulated() {
            return Err(Error::Unsupported(
                "closed-form tail derivatives are unavailable for tabulated profiles".into(),
            ));
        }
        if x < self.x0 {
            return Err(Error::Domain(format!(
                "tail derivative requested at x = {x} left of the tail start x0 = {}",
                self.x0
            )));
        }
        Ok(())
    }

    /// Numerical infimum of `u0` over `(-inf, x_end]`, by exact plateau value
    /// plus dense sampling of the glue and (log-spaced) tail up to `x_end`.
    /// For the monotone built-in profiles this equals `u0(x_end)` when
    /// `x_end >= x0`.
    pub fn infimum_up_to(&self, x_end: f64) -> f64 {
        let mut inf = self.eval(x_end).min(self.eta);
        let x_glue = self.x_glue();
        if x_end > x_glue {
            let hi = x_end.min(self.x0);
            for i in 0..=256 {
                let x = x_glue + (hi - x_glue) * i as f64 / 256.0;
                inf = inf.min(self.eval(x));
            }
        }
        if x_end > self.x0 {
            let ratio = x_end / self.x0;
            for i in 0..=256 {
                let x = self.x0 * ratio.powf(i as f64 / 256.0);
                inf = inf.min(self.eval(x));
            }
        }
        inf
    }

    /// Classifies the tail decay relative to the algebraic family.
    ///
    /// Built-in kinds classify by construction; sampled profiles are fitted
    /// over the last decade of abscissae: the decade is split in half and the
    /// local slopes of `ln u0` vs `ln x` are compared (steepening means
    /// lighter than algebraic, flattening heavier, stable algebraic).
    pub fn classify_tail(&self) -> Result<TailClass> {
        match &self.tail {
            Tail::Algebraic { alpha } => Ok(TailClass::Algebraic { alpha: *alpha }),
            Tail::StretchedExponential { .. } | Tail::LogLinear { .. } => {
                Ok(TailClass::LighterThanAlgebraic)
            }
            Tail::LogAlgebraic { .. } => Ok(TailClass::HeavierThanAlgebraic),
            Tail::Tabulated { xs, us } => classify_sampled_tail(xs, us, self.x0),
        }
    }
}

/// Relative slope change between half-decades below which a sampled tail is
/// declared algebraic.
const TAIL_SLOPE_TOL: f64 = 0.1;

fn classify_sampled_tail(xs: &[f64], us: &[f64], x0: f64) -> Result<TailClass> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(us)
        .filter(|(&x, &u)| x > x0 && u > 0.0)
        .map(|(&x, &u)| (x, u))
        .collect();
    if pts.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "tail classification needs at least 10 positive samples beyond x0, got {}",
            pts.len()
        )));
    }
    let x_max = pts.last().unwrap().0;
    let mut decade: Vec<(f64, f64)> = pts.iter().copied().filter(|(x, _)| *x >= x_max / 10.0).collect();
    if decade.len() < 10 {
        decade = pts;
    }
    let lx: Vec<f64> = decade.iter().map(|(x, _)| x.ln()).collect();
    let lu: Vec<f64> = decade.iter().map(|(_, u)| u.ln()).collect();
    let (slope, _, _) = least_squares_line(&lx, &lu)
        .ok_or_else(|| Error::InsufficientData("degenerate abscissae in tail fit".into()))?;
    let alpha_hat = -slope;

    let mid = decade.len() / 2;
    let fit_half = |a: usize, b: usize| -> Option<f64> {
        least_squares_line(&lx[a..b], &lu[a..b]).map(|(s, _, _)| -s)
    };
    if let (Some(a1), Some(a2)) = (fit_half(0, mid), fit_half(mid, decade.len())) {
        let scale = a1.abs().max(1e-3);
        if a2 - a1 > TAIL_SLOPE_TOL * scale {
            return Ok(TailClass::LighterThanAlgebraic);
        }
        if a1 - a2 > TAIL_SLOPE_TOL * scale {
            return Ok(TailClass::HeavierThanAlgebraic);
        }
    }
    Ok(TailClass::Algebraic { alpha: alpha_hat })
}

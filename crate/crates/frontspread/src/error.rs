//! Crate-wide error type.
//!
//! Operations that can fail return [`Result`]; the variants distinguish bad
//! arguments, domain violations, numerical breakdown, and resource limits so
//! callers (in particular the CLI) can map them to precise diagnostics.

/// Errors produced by model construction, simulation, and certification.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation point lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation is not defined for this model/profile variant.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Too few samples to carry out a fit or classification.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A least-squares fit could not be performed on the provided window.
    #[error("fit error: {0}")]
    Fit(String),

    /// The closed-form reaction solution was queried at or past its blow-up time.
    /// Carries the blow-up horizon for the queried abscissa.
    #[error("closed-form solution queried at t past its blow-up horizon T = {horizon}")]
    PastBlowup { horizon: f64 },

    /// A constructed comparison function violates one of its own side conditions.
    #[error("construction violation: {0}")]
    Construction(String),

    /// The discrete maximum principle failed: a grid value left `[-1e-12, 1+1e-12]`.
    #[error("numerical stability violation at t = {t}, x = {x}: value {value}")]
    NumericalStability { t: f64, x: f64, value: f64 },

    /// Domain expansion would exceed the configured node budget.
    #[error("resource limit: domain expansion to {requested} nodes exceeds cap of {cap}")]
    ResourceLimit { requested: usize, cap: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

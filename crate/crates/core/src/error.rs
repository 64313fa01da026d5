use thiserror::Error;

/// Errors produced by geometric constructors, quadrature and the
/// operator/weight estimators.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// The measure y^alpha dx dy has infinite mass on every box.
    #[error("non-integrable measure: alpha = {alpha} must be > -1")]
    NonIntegrableMeasure { alpha: f64 },

    /// An integral diverges; detected from the integrand's analytic
    /// decay exponents, not from quadrature blow-up.
    #[error("divergent integral: {reason}")]
    Divergent { reason: String },

    /// Refinement exhausted the configured depth without meeting the
    /// tolerance. Carries the best available estimate.
    #[error("tolerance not met: best estimate {value} with error estimate {error_estimate}")]
    ToleranceNotMet { value: f64, error_estimate: f64 },

    /// The integrand evaluated to NaN or infinity at a sample point.
    #[error("non-finite integrand sample at ({x}, {y})")]
    NonFiniteSample { x: f64, y: f64 },

    /// A box average has a zero or divergent denominator.
    #[error("degenerate average: {reason}")]
    DegenerateAverage { reason: String },

    /// A weight fails membership in the requested class; names the
    /// interval on which a box integral diverges.
    #[error("weight not in class: box integral diverges on [{left}, {right})")]
    WeightNotInClass { left: f64, right: f64 },

    /// No feasible Schur parameters exist for the given exponents.
    #[error("infeasible: {reason}")]
    Infeasible { reason: String },

    /// Malformed input (bad parameter range, parse failure, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn divergent(msg: impl Into<String>) -> Self {
        Error::Divergent { reason: msg.into() }
    }
}

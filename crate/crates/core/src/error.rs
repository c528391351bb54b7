use thiserror::Error;

/// Errors raised by the certification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error("unknown catalog function `{0}`")]
    UnknownCatalogName(String),

    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },

    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("t = {t} lies outside the function domain ({constraint})")]
    DomainViolation { t: f64, constraint: &'static str },

    #[error("non-finite sample at t = {t}")]
    NonFiniteSample { t: f64 },

    #[error("x = {x} outside the admissible range [{lo}, {hi}]")]
    PointOutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("oracle did not reach tolerance {tol:e} within {evaluations} evaluations")]
    OracleNonConvergence { tol: f64, evaluations: usize },

    #[error("shape hypothesis not verified: |f''|^{q} is {verdict} on the interval, {required} required")]
    ShapeHypothesisUnverified {
        q: f64,
        verdict: String,
        required: &'static str,
    },

    #[error("invalid Hölder exponent p = {0}: need 1 < p <= 1024")]
    InvalidHolder(f64),

    #[error("no feasible Hölder exponent: shape check failed for every scanned q")]
    NoFeasibleP,

    #[error("no applicable theorem: |f''|^q is neither convex nor concave for every candidate q")]
    NoApplicableTheorem,

    #[error("means require positive arguments, got ({0}, {1})")]
    NonPositiveArgument(f64, f64),

    #[error("generalized logarithmic mean order n = {0} is not allowed (n must avoid -1 and 0)")]
    InvalidOrder(i32),

    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, CertError>;

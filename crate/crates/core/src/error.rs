use thiserror::Error;

/// Errors surfaced by the analytic and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integration lower bound must be finite and nonnegative, got {0}")]
    InvalidDomain(f64),

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadratureSpec(&'static str),

    #[error(
        "quadrature did not reach tolerance after {subdivisions} subdivisions \
         (value {value:.6e}, error estimate {error:.3e})"
    )]
    NonConvergent {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("theta = {theta} is degenerate: no power remains for {starved}")]
    DegenerateTheta { theta: f64, starved: &'static str },

    #[error("invalid system configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid operating point: {0}")]
    InvalidMode(String),

    #[error("sweep has no row at {0} dB")]
    OutOfRange(f64),

    #[error("outage probability is zero (or failed) at {0} dB; log-slope is undefined")]
    ZeroProbability(f64),

    #[error("sweep grid value {0} lies outside the open interval (0, 1)")]
    InvalidGrid(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

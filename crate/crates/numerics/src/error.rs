use thiserror::Error;

use crate::gaussian::ConvergenceFailure;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("Gaussian integral does not converge: {0}")]
    Divergent(ConvergenceFailure),
    #[error("Re(alpha) = {0} must be positive")]
    NonPositiveAlpha(f64),
    #[error("invalid quadrature size: {0}")]
    InvalidSize(String),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("|B| = {b} below the oscillation guard {min}")]
    OscillationGuard { b: f64, min: f64 },
    #[error("input does not decay at the grid ends (edge/peak = {ratio:.3e})")]
    InsufficientDecay { ratio: f64 },
    #[error("input grid is not uniform or too short: {0}")]
    BadGrid(String),
    #[error("kernel chirp under-resolved: phase step {step:.3} rad exceeds pi")]
    UnderResolved { step: f64 },
}

use thiserror::Error;

use crate::{space::Mode, FockSpace, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("unsupported mode count {0}: only 1 or 2 modes")]
    UnsupportedModes(usize),
    #[error("cutoff must be >= 1, got {0}")]
    InvalidCutoff(usize),
    #[error("mode {0:?} is not present in a single-mode space")]
    ModeNotPresent(Mode),
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(FockSpace, FockSpace),
    #[error("expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
    #[error("number {n} exceeds cutoff {cutoff}")]
    NumberOutOfRange { n: usize, cutoff: usize },
    #[error("coherent amplitude {z} leaks {tail:.3e} of its norm beyond cutoff {cutoff}")]
    Leakage { z: C64, tail: f64, cutoff: usize },
    #[error("block size {k} invalid for cutoff {cutoff}")]
    InvalidBlock { k: usize, cutoff: usize },
    #[error("expected {expected} mode specs, found {found}")]
    SpecCount { expected: usize, found: usize },
    #[error("state has zero norm")]
    ZeroNorm,
}

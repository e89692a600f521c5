use fock_core::FockError;
use gaussian_unitaries::GaussianError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatesError {
    #[error("degenerate parameters: {0}")]
    Degenerate(&'static str),
    #[error("non-finite label: {0}")]
    NonFinite(&'static str),
    #[error("two-mode space required")]
    NeedsTwoModes,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

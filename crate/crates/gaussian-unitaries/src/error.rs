use fock_core::FockError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("ray matrix is not unimodular: AD - BC - 1 = {0:.3e}")]
    NotUnimodular(f64),
    #[error("Fresnel parameters violate |s|^2 - |r|^2 = 1 by {0:.3e}")]
    NotUnitary(f64),
    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),
    #[error("beam splitter needs a two-mode space")]
    NeedsTwoModes,
    #[error(transparent)]
    Fock(#[from] FockError),
}

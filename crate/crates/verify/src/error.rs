use fock_core::FockError;
use gaussian_unitaries::GaussianError;
use ices_numerics::NumericsError;
use ices_states::StatesError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("vanishing denominator in {0}: the regularized delta is numerically zero")]
    VanishingDenominator(&'static str),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    States(#[from] StatesError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

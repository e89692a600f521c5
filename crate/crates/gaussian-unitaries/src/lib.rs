//! Gaussian unitaries on truncated Fock spaces: the Fresnel operator `F(s, r)`,
//! the beam splitter `B(θ) = exp θ(ab† − a†b)`, the squeezer
//! `S(λ) = exp (λ/2)(b² − b†²)`, and the ABCD ↔ `(s, r)` maps.
//!
//! Dense operators on a target cutoff are exact compressions of the
//! infinite-dimensional unitaries (every retained matrix element is exact), except
//! the beam splitter, whose truncated generator is exponentiated so that the result
//! stays exactly unitary. The `*_apply` functions act on vectors in a padded space
//! that grows until the result no longer touches its upper edge.

mod beamsplitter;
mod error;
mod fresnel;
mod padded;
mod params;
mod squeezer;

pub use beamsplitter::{beamsplitter, beamsplitter_sector};
pub use error::GaussianError;
pub use fresnel::{fresnel_matrix, fresnel_operator, EulerFresnel};
pub use padded::{padded_exp_apply, rotate_apply, squeeze_apply, PaddedVectors, PADDING_TAIL_TOLERANCE};
pub use params::{
    fresnel_params_from_ray, ray_from_fresnel, FresnelParams, RayMatrix, SqueezeStrength,
    CONVERSION_TOLERANCE, INVARIANT_TOLERANCE,
};
pub use squeezer::{squeeze_matrix, squeezer};

use fock_core::{FockError, FockOperator};

/// `U X U†`.
pub fn heisenberg_transform(u: &FockOperator, x: &FockOperator) -> Result<FockOperator, FockError> {
    u.mul(x)?.mul(&u.adjoint())
}

pub use fock_core::C64;

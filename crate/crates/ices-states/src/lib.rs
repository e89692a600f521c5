//! The intermediate coordinate-momentum state (ICMS) `|q⟩_{s,r} = F|q⟩`, its
//! momentum counterpart (IMCS) `|p⟩_{s,r} = F|p⟩`, the intermediate
//! coherent-entangled state `|ζ⟩ = B(π/4)|z⟩_a ⊗ |q⟩_{b,s,r}` and its conjugate
//! `|κ⟩ = B(π/4)|z⟩_a ⊗ |p⟩_{b,s,r}`.
//!
//! Every state is available from its closed form, a Gaussian of creation
//! operators on the vacuum summed exactly, and for the two-mode states also
//! from the beam-splitter protocol. States are continuum-normalized and stored
//! unnormalized.

mod error;
mod labels;
mod schmidt;
mod series;
mod states;

pub use error::StatesError;
pub use labels::{BuildMethod, IcesLabel, KappaLabel};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition};
pub use series::raising_exponential;
pub use states::{ices, ices_conjugate, icms, imcs};

pub use fock_core::C64;

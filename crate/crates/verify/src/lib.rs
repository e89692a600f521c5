//! Verification suites. Every check produces [`ResidualRecord`]s: a claim
//! identifier, the parameters used, a non-negative residual with the norm it is
//! measured in, a tolerance, and the resulting verdict. Failing residuals are
//! reported, never raised as errors; errors are reserved for invalid inputs.

mod classical;
mod coherent;
mod commutator;
mod completeness;
mod eigen;
mod entanglement;
mod error;
mod gaussian;
mod identities;
mod overlap;
mod record;
mod sampling;
mod squeeze;
mod util;

pub use eigen::{degenerate_reduction_check, eigen_residual, fresnel_ket_check, method_equivalence_check, EigenTarget};
pub use classical::{classical_fresnel_check, ClassicalGrid};
pub use coherent::{
    coherent_matrix_element, coherent_overlap, coherent_state, x_symbol, y_symbol, LinearSymbol, NormalSymbol, SymbolShape,
};
pub use commutator::{commutator_negative_control, conjugate_commutator_check};
pub use completeness::{completeness_block, completeness_check};
pub use entanglement::{entanglement_witness, product_entropy_check};
pub use error::VerifyError;
pub use gaussian::{
    boundary_specs, coherent_kernel_check, gaussian_formula_check, interior_specs, line_gaussian_check, numerically_convergent,
    planar_trapezoid, validator_boundary_check, PlanarTrapezoid, INTERIOR_RULE,
};
pub use identities::{hermite_generating_check, identity_check, OperatorIdentity, MAX_POWER, MAX_PROBE_AMPLITUDE, MAX_QUADRATURE_WEIGHT};
pub use overlap::{coherent_factor, nascent_delta_check, overlap_factorization};
pub use sampling::{disk_point, random_probes, seeded_rng, Probe, RaySampler};
pub use squeeze::{
    printed_transforms, squeeze_collapse_check, squeeze_generator, squeeze_generator_check, squeeze_heisenberg_check,
    squeeze_operator, squeeze_unitarity_check, Linear,
};
pub use record::{all_pass, ParamValue, ResidualRecord, Tier, Tiers, Tolerance, Verdict};
pub use util::{phase_free_distance, x_operator, y_operator};

pub use fock_core::C64;

use fock_core::{FockSpace, FockState};
use ices_states::{ices, schmidt_decompose, BuildMethod, IcesLabel};

use crate::coherent::coherent_state;
use crate::{ResidualRecord, Tolerance, VerifyError, C64};

/// Entanglement entropy of the truncated `|ζ⟩` against a lower bound. The
/// residual is the shortfall `max(0, min_entropy − S)`, so the record passes
/// exactly when `S ≥ min_entropy` for any tolerance below the bound.
pub fn entanglement_witness(label: &IcesLabel, space: FockSpace, min_entropy: f64, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    if !(min_entropy.is_finite() && min_entropy >= 0.0) {
        return Err(VerifyError::InvalidInput(format!("entropy bound {min_entropy} must be non-negative")));
    }
    let state = ices(space, label, BuildMethod::ClosedForm)?;
    let s = schmidt_decompose(&state)?;
    let m = label.params.ray();
    Ok(ResidualRecord::new("ices.entanglement", (min_entropy - s.entropy).max(0.0), "shortfall of the Schmidt entropy below the bound", tol)
        .with("entropy", s.entropy)
        .with("min_entropy", min_entropy)
        .with("schmidt_rank_1e-8", s.singular_values.iter().filter(|&&v| v > 1e-8).count())
        .with("z", label.z)
        .with("q", label.q)
        .with("A", m.a())
        .with("B", m.b())
        .with("C", m.c())
        .with("D", m.d())
        .with("cutoff", space.cutoff()))
}

/// Schmidt entropy of the product `|z_a⟩ ⊗ |z_b⟩`, which must vanish.
pub fn product_entropy_check(z: [C64; 2], space: FockSpace, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    let state: FockState = coherent_state(space, z)?;
    let s = schmidt_decompose(&state)?;
    Ok(ResidualRecord::new("product.entanglement", s.entropy.max(0.0), "Schmidt entropy of a product state", tol)
        .with("z_a", z[0])
        .with("z_b", z[1])
        .with("cutoff", space.cutoff()))
}

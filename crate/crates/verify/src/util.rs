use fock_core::{FockSpace, FockState, LadderExpr, Mode};
use gaussian_unitaries::RayMatrix;
use nalgebra::DMatrix;

use crate::{VerifyError, C64};

/// `D(Q_b − Q_a) − B(P_b − P_a)`.
pub fn x_operator(m: &RayMatrix) -> LadderExpr {
    let dq = LadderExpr::position(Mode::B) - LadderExpr::position(Mode::A);
    let dp = LadderExpr::momentum(Mode::B) - LadderExpr::momentum(Mode::A);
    dq * m.d() - dp * m.b()
}

/// `A(P_b − P_a) − C(Q_b − Q_a)`.
pub fn y_operator(m: &RayMatrix) -> LadderExpr {
    let dq = LadderExpr::position(Mode::B) - LadderExpr::position(Mode::A);
    let dp = LadderExpr::momentum(Mode::B) - LadderExpr::momentum(Mode::A);
    dp * m.a() - dq * m.c()
}

/// `‖(op − λ)ψ‖ / ‖ψ‖` over the components with every occupation `≤ k`.
///
/// The truncated `op` is exact on those components when `op` is linear in the
/// ladder operators and `k < cutoff`.
pub fn eigen_defect(op: &LadderExpr, eigenvalue: C64, state: &FockState, k: usize) -> Result<f64, VerifyError> {
    check_block(state.space(), k)?;
    let lhs = op.apply(state)?;
    let idx = state.space().inner_indices(k);
    let (num, den) = idx.iter().fold((0.0, 0.0), |(n, d), &i| {
        let psi = state.amplitudes()[i];
        (n + (lhs.amplitudes()[i] - eigenvalue * psi).norm_sqr(), d + psi.norm_sqr())
    });
    ratio(num, den, "eigen residual")
}

pub fn check_block(space: FockSpace, k: usize) -> Result<(), VerifyError> {
    if k >= space.cutoff() {
        return Err(VerifyError::InvalidInput(format!("block {k} must lie below cutoff {}", space.cutoff())));
    }
    Ok(())
}

fn ratio(num: f64, den: f64, what: &'static str) -> Result<f64, VerifyError> {
    if den <= 0.0 {
        return Err(VerifyError::VanishingDenominator(what));
    }
    Ok((num / den).sqrt())
}

/// `min_φ ‖e^{iφ}u − v‖ / ‖v‖`, the optimal phase being `arg ⟨u, v⟩`.
pub fn phase_free_distance(u: &[C64], v: &[C64]) -> f64 {
    let overlap: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    let num: f64 = u.iter().zip(v).map(|(a, b)| (phase * a - b).norm_sqr()).sum();
    let den: f64 = v.iter().map(|b| b.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Components of `state` with every occupation `≤ k`.
pub fn inner_components(state: &FockState, k: usize) -> Vec<C64> {
    state.space().inner_indices(k).into_iter().map(|i| state.amplitudes()[i]).collect()
}

use fock_core::FockState;

use crate::StatesError;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Descending; squares sum to one.
    pub singular_values: Vec<f64>,
    /// `−Σ σ² ln σ²` (natural logarithm).
    pub entropy: f64,
}

/// SVD of the coefficient matrix `c[n_a, n_b]` of the normalized state.
pub fn schmidt_decompose(state: &FockState) -> Result<SchmidtDecomposition, StatesError> {
    if state.space().modes() != 2 {
        return Err(StatesError::NeedsTwoModes);
    }
    let norm = state.norm();
    if norm == 0.0 {
        return Err(StatesError::ZeroNorm);
    }
    let m = state.coefficient_matrix()? / fock_core::C64::from(norm);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let entropy = sv
        .iter()
        .map(|s| s * s)
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    Ok(SchmidtDecomposition { singular_values: sv, entropy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ices, BuildMethod, IcesLabel};
    use fock_core::{basis_state, FockSpace, ModeSpec, C64};
    use gaussian_unitaries::FresnelParams;
    use proptest::prelude::*;

    #[test]
    fn product_state_is_unentangled() {
        let s = FockSpace::two(10).unwrap();
        let st = basis_state(s, &[ModeSpec::Coherent(C64::new(0.4, 0.1)), ModeSpec::Coherent(C64::new(-0.2, 0.5))]).unwrap();
        let d = schmidt_decompose(&st).unwrap();
        assert!((d.singular_values[0] - 1.0).abs() < 1e-12);
        assert!(d.entropy.abs() < 1e-10);
        let sum: f64 = d.singular_values.iter().map(|s| s * s).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_ices_is_entangled() {
        let s = FockSpace::two(12).unwrap();
        let label = IcesLabel::new(C64::new(0.0, 0.0), 0.0, FresnelParams::identity()).unwrap();
        let st = ices(s, &label, BuildMethod::ClosedForm).unwrap();
        let d = schmidt_decompose(&st).unwrap();
        assert!(d.entropy > 0.5, "entropy {}", d.entropy);
        // Regression value of the truncated state at cutoff 12 per mode.
        assert!((d.entropy - IDENTITY_ICES_ENTROPY_12).abs() < 1e-10, "{}", d.entropy);
    }

    const IDENTITY_ICES_ENTROPY_12: f64 = 1.2589295415924464;

    #[test]
    fn zero_state_rejected() {
        let s = FockSpace::two(3).unwrap();
        assert_eq!(schmidt_decompose(&FockState::zeros(s)), Err(StatesError::ZeroNorm));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn entropy_invariant_under_local_phase_rotations(phi in -3.0f64..3.0, on_a in any::<bool>(), q in -1.0f64..1.0) {
            let s = FockSpace::two(10).unwrap();
            let label = IcesLabel::new(C64::new(0.2, -0.3), q, FresnelParams::identity()).unwrap();
            let st = ices(s, &label, BuildMethod::ClosedForm).unwrap();
            let mut amps = st.amplitudes().clone();
            for i in 0..s.dim() {
                let [na, nb] = s.occupations(i);
                let n = if on_a { na } else { nb };
                amps[i] *= C64::from_polar(1.0, phi * n as f64);
            }
            let rotated = FockState::new(s, amps).unwrap();
            let e0 = schmidt_decompose(&st).unwrap().entropy;
            let e1 = schmidt_decompose(&rotated).unwrap().entropy;
            prop_assert!((e0 - e1).abs() <= 1e-10);
        }
    }
}

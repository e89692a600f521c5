use fock_core::{FockSpace, FockState, LadderExpr, Mode};
use nalgebra::DMatrix;

use crate::{StatesError, C64};

/// `scalar · exp(ℓ_a a† + ℓ_b b† + q_aa a†² + q_ab a†b† + q_bb b†²)|0⟩`.
///
/// The exponent only raises, so the Taylor series truncated to the box is exact
/// for every retained component and terminates after `modes · cutoff` terms.
/// On a one-mode space only the `a` coefficients may be nonzero.
pub fn raising_exponential(
    space: FockSpace,
    linear: [C64; 2],
    quadratic: [C64; 3],
    scalar: C64,
) -> Result<FockState, StatesError> {
    let zero = C64::new(0.0, 0.0);
    let ad = LadderExpr::raise(Mode::A);
    let mut expo = ad.clone() * linear[0] + ad.clone() * ad.clone() * quadratic[0];
    if space.modes() == 2 {
        let bd = LadderExpr::raise(Mode::B);
        expo = expo + bd.clone() * linear[1] + ad * bd.clone() * quadratic[1] + bd.clone() * bd * quadratic[2];
    } else if linear[1] != zero || quadratic[1] != zero || quadratic[2] != zero {
        return Err(StatesError::NeedsTwoModes);
    }
    let action = expo.simplified().compile(space)?;
    let dim = space.dim();
    let mut term = DMatrix::<C64>::zeros(dim, 1);
    term[(0, 0)] = scalar;
    let mut acc = term.clone();
    for k in 1..=space.modes() * space.cutoff() {
        term = action.apply(&term) * C64::from(1.0 / k as f64);
        acc += &term;
    }
    Ok(FockState::new(space, acc.column(0).into_owned())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fock_core::{basis_state, ModeSpec};

    #[test]
    fn linear_exponent_gives_coherent_state() {
        let s = FockSpace::two(10).unwrap();
        let (za, zb) = (C64::new(0.3, -0.2), C64::new(-0.5, 0.1));
        let norm = (-(za.norm_sqr() + zb.norm_sqr()) / 2.0).exp();
        let z = C64::new(0.0, 0.0);
        let st = raising_exponential(s, [za, zb], [z, z, z], C64::from(norm)).unwrap();
        let coh = basis_state(s, &[ModeSpec::Coherent(za), ModeSpec::Coherent(zb)]).unwrap();
        assert!((st.amplitudes() - coh.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn one_mode_rejects_b_terms() {
        let s = FockSpace::single(4).unwrap();
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert!(raising_exponential(s, [z, one], [z, z, z], one).is_err());
    }
}

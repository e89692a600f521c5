use fock_core::{FockOperator, FockSpace, Mode};
use nalgebra::DMatrix;

use crate::padded::squeeze_apply;
use crate::{GaussianError, SqueezeStrength, C64};

/// Exact compression of `S(λ) = exp (λ/2)(a² − a†²)` to `cutoff`: column `n` is
/// `S(λ)|n⟩` computed in a padded basis and cut back.
pub fn squeeze_matrix(cutoff: usize, lambda: f64) -> DMatrix<C64> {
    let dim = cutoff + 1;
    let cols = squeeze_apply(lambda, &DMatrix::identity(dim, dim));
    cols.rows(0, dim).into_owned()
}

/// `S(λ)` acting on `mode`.
pub fn squeezer(space: FockSpace, mode: Mode, strength: SqueezeStrength) -> Result<FockOperator, GaussianError> {
    space.check_mode(mode)?;
    let single = FockOperator::new(FockSpace::single(space.cutoff())?, squeeze_matrix(space.cutoff(), strength.lambda()))?;
    Ok(if space.modes() == 1 { single } else { single.on_mode(mode)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg_transform;
    use fock_core::{inner_block_distance, mode_operator, OperatorKind};

    #[test]
    fn zero_is_identity() {
        let s = FockSpace::two(4).unwrap();
        let op = squeezer(s, Mode::B, SqueezeStrength::new(0.0).unwrap()).unwrap();
        assert_eq!(op, FockOperator::identity(s));
    }

    #[test]
    fn heisenberg_relation_and_inverse() {
        let lambda = 0.3;
        let pad = FockSpace::single(96).unwrap();
        let st = SqueezeStrength::new(lambda).unwrap();
        let op = squeezer(pad, Mode::A, st).unwrap();
        let b = mode_operator(pad, Mode::A, OperatorKind::Annihilate).unwrap();
        let lhs = heisenberg_transform(&op, &b).unwrap();
        let rhs = b.scale(C64::from(lambda.cosh())).add(&b.adjoint().scale(C64::from(lambda.sinh()))).unwrap();
        assert!(inner_block_distance(&lhs, &rhs, 16).unwrap() < 1e-8);
        let inv = squeezer(pad, Mode::A, st.inverse()).unwrap();
        let prod = op.mul(&inv).unwrap();
        assert!(inner_block_distance(&prod, &FockOperator::identity(pad), 16).unwrap() < 1e-10);
    }

    #[test]
    fn mode_check() {
        let s = FockSpace::single(4).unwrap();
        assert!(squeezer(s, Mode::B, SqueezeStrength::new(0.1).unwrap()).is_err());
    }
}

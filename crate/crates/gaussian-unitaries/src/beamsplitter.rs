use fock_core::{matrix_exp_dense, FockOperator, FockSpace};
use nalgebra::DMatrix;

use crate::{GaussianError, C64};

/// Generator `ab† − a†b` on the states `|n_a, T − n_a⟩` with `n_a ∈ lo..=hi`.
fn sector_generator(total: usize, lo: usize, hi: usize) -> DMatrix<f64> {
    let dim = hi - lo + 1;
    let mut g = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let na = (lo + i) as f64;
        let nb = (total - lo - i) as f64;
        // ab†|n_a, n_b⟩ = √(n_a (n_b + 1)) |n_a − 1, n_b + 1⟩
        if i > 0 {
            g[(i - 1, i)] += (na * (nb + 1.0)).sqrt();
        }
        // −a†b|n_a, n_b⟩ = −√((n_a + 1) n_b) |n_a + 1, n_b − 1⟩
        if i + 1 < dim {
            g[(i + 1, i)] -= ((na + 1.0) * nb).sqrt();
        }
    }
    g
}

fn real_exp(g: &DMatrix<f64>, theta: f64) -> DMatrix<f64> {
    let c = g.map(|x| C64::from(x * theta));
    matrix_exp_dense(&c).map(|x| x.re)
}

/// `B(θ)` restricted to the complete sector of total number `T`, basis
/// `|n_a, T − n_a⟩` for `n_a = 0..=T`. These entries are exact.
pub fn beamsplitter_sector(total: usize, theta: f64) -> DMatrix<f64> {
    real_exp(&sector_generator(total, 0, total), theta)
}

/// `B(θ) = exp θ(ab† − a†b)` on a two-mode space.
///
/// The truncated generator conserves the total number, so it is exponentiated
/// sector by sector. The result is exactly unitary, and it agrees with the
/// infinite-dimensional operator on every sector with `T ≤ cutoff`.
pub fn beamsplitter(space: FockSpace, theta: f64) -> Result<FockOperator, GaussianError> {
    if space.modes() != 2 {
        return Err(GaussianError::NeedsTwoModes);
    }
    if !theta.is_finite() {
        return Err(GaussianError::NonFinite("beam splitter angle"));
    }
    let n = space.cutoff();
    let mut m = DMatrix::<C64>::zeros(space.dim(), space.dim());
    for total in 0..=2 * n {
        let lo = total.saturating_sub(n);
        let hi = total.min(n);
        let block = real_exp(&sector_generator(total, lo, hi), theta);
        let idx = |i: usize| space.index(&[lo + i, total - lo - i]).expect("in box");
        for j in 0..block.ncols() {
            for i in 0..block.nrows() {
                m[(idx(i), idx(j))] = C64::from(block[(i, j)]);
            }
        }
    }
    Ok(FockOperator::new(space, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg_transform;
    use fock_core::{compose, inner_block_distance, matrix_exp, mode_operator, LadderExpr, Mode, OperatorKind};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn zero_angle_and_one_mode() {
        let s = FockSpace::two(5).unwrap();
        assert!(beamsplitter(s, 0.0).unwrap().sub(&FockOperator::identity(s)).unwrap().max_abs() < 1e-15);
        assert_eq!(beamsplitter(FockSpace::single(5).unwrap(), 0.3), Err(GaussianError::NeedsTwoModes));
    }

    #[test]
    fn matches_dense_exponential_of_generator() {
        let s = FockSpace::two(6).unwrap();
        let g = LadderExpr::lower(Mode::A) * LadderExpr::raise(Mode::B) - LadderExpr::raise(Mode::A) * LadderExpr::lower(Mode::B);
        let dense = matrix_exp(&g.to_operator(s).unwrap().scale(C64::from(FRAC_PI_4))).unwrap();
        let b = beamsplitter(s, FRAC_PI_4).unwrap();
        assert!(b.sub(&dense).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn conjugation_relations_and_unitarity() {
        let s = FockSpace::two(16).unwrap();
        let b = beamsplitter(s, FRAC_PI_4).unwrap();
        let ad = mode_operator(s, Mode::A, OperatorKind::Create).unwrap();
        let bd = mode_operator(s, Mode::B, OperatorKind::Create).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let lhs = heisenberg_transform(&b, &ad).unwrap();
        let rhs = ad.add(&bd).unwrap().scale(C64::from(r));
        assert!(inner_block_distance(&lhs, &rhs, 8).unwrap() < 1e-10);
        let lhs = heisenberg_transform(&b, &bd).unwrap();
        let rhs = bd.sub(&ad).unwrap().scale(C64::from(r));
        assert!(inner_block_distance(&lhs, &rhs, 8).unwrap() < 1e-10);
        let inv = beamsplitter(s, -FRAC_PI_4).unwrap();
        let prod = compose(&[&b, &inv]).unwrap();
        assert!(inner_block_distance(&prod, &FockOperator::identity(s), 8).unwrap() < 1e-10);
        assert!(inv.sub(&b.adjoint()).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn full_sector_agrees_with_box_on_complete_sectors() {
        let s = FockSpace::two(6).unwrap();
        let b = beamsplitter(s, 0.37).unwrap();
        for total in 0..=6 {
            let sec = beamsplitter_sector(total, 0.37);
            for i in 0..=total {
                for j in 0..=total {
                    let e = b.entry(&[i, total - i], &[j, total - j]).unwrap();
                    assert!((e.re - sec[(i, j)]).abs() < 1e-14 && e.im == 0.0);
                }
            }
        }
    }
}

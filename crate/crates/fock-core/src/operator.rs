use nalgebra::DMatrix;

use crate::linalg::{cmul, matrix_exp_dense};
use crate::{FockError, FockSpace, FockState, Mode, C64};

/// Dense operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    matrix: DMatrix<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Annihilate,
    Create,
    /// `Q = (a + a†)/√2`.
    Position,
    /// `P = (a − a†)/(i√2)`.
    Momentum,
    Number,
}

fn check_finite(m: &DMatrix<C64>) -> Result<(), FockError> {
    if m.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(FockError::NonFinite("operator"))
    }
}

impl FockOperator {
    pub fn new(space: FockSpace, matrix: DMatrix<C64>) -> Result<Self, FockError> {
        let n = space.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(FockError::DimensionMismatch { expected: n, found: matrix.nrows().max(matrix.ncols()) });
        }
        check_finite(&matrix)?;
        Ok(Self { space, matrix })
    }

    pub fn identity(space: FockSpace) -> Self {
        let n = space.dim();
        Self { space, matrix: DMatrix::identity(n, n) }
    }

    pub fn zeros(space: FockSpace) -> Self {
        let n = space.dim();
        Self { space, matrix: DMatrix::zeros(n, n) }
    }

    /// Diagonal operator with entries `f([n_a, n_b])`.
    pub fn diagonal(space: FockSpace, f: impl Fn([usize; 2]) -> C64) -> Self {
        let n = space.dim();
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..n {
            matrix[(i, i)] = f(space.occupations(i));
        }
        Self { space, matrix }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn entry(&self, row: &[usize], col: &[usize]) -> Option<C64> {
        Some(self.matrix[(self.space.index(row)?, self.space.index(col)?)])
    }

    fn same_space(&self, other: &Self) -> Result<(), FockError> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(FockError::SpaceMismatch(self.space, other.space))
        }
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { space: self.space, matrix: &self.matrix * c }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        self.same_space(other)?;
        Ok(Self { space: self.space, matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        self.same_space(other)?;
        Ok(Self { space: self.space, matrix: &self.matrix - &other.matrix })
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, FockError> {
        self.same_space(other)?;
        Ok(Self { space: self.space, matrix: cmul(&self.matrix, &other.matrix) })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, FockError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState, FockError> {
        if state.space() != self.space {
            return Err(FockError::SpaceMismatch(self.space, state.space()));
        }
        FockState::new(self.space, &self.matrix * state.amplitudes())
    }

    /// Block with every occupation `≤ k`, rows and columns in basis order.
    pub fn inner_block(&self, k: usize) -> Result<DMatrix<C64>, FockError> {
        if k > self.space.cutoff() {
            return Err(FockError::InvalidBlock { k, cutoff: self.space.cutoff() });
        }
        let idx = self.space.inner_indices(k);
        Ok(DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]))
    }

    /// The same block as an operator on the smaller space with cutoff `k`.
    pub fn restrict(&self, k: usize) -> Result<Self, FockError> {
        let space = self.space.with_cutoff(k)?;
        Self::new(space, self.inner_block(k)?)
    }

    /// Zero-padded copy on a larger cutoff.
    pub fn embed(&self, cutoff: usize) -> Result<Self, FockError> {
        if cutoff < self.space.cutoff() {
            return Err(FockError::InvalidBlock { k: cutoff, cutoff: self.space.cutoff() });
        }
        let space = self.space.with_cutoff(cutoff)?;
        let map: Vec<usize> =
            (0..self.space.dim()).map(|i| self.space.map_index(i, &space).expect("fits")).collect();
        let mut matrix = DMatrix::zeros(space.dim(), space.dim());
        for (j, &mj) in map.iter().enumerate() {
            for (i, &mi) in map.iter().enumerate() {
                matrix[(mi, mj)] = self.matrix[(i, j)];
            }
        }
        Ok(Self { space, matrix })
    }

    /// Extends a one-mode operator to a two-mode space, acting on `mode`.
    pub fn on_mode(&self, mode: Mode) -> Result<Self, FockError> {
        if self.space.modes() != 1 {
            return Err(FockError::UnsupportedModes(self.space.modes()));
        }
        let space = FockSpace::two(self.space.cutoff())?;
        let n = self.space.cutoff() + 1;
        let id = DMatrix::<C64>::identity(n, n);
        let matrix = match mode {
            Mode::A => self.matrix.kronecker(&id),
            Mode::B => id.kronecker(&self.matrix),
        };
        Ok(Self { space, matrix })
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn ladder_1mode(n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for k in 1..=n {
        m[(k - 1, k)] = C64::from((k as f64).sqrt());
    }
    m
}

/// Ladder, quadrature and number operators on one mode of a space.
pub fn mode_operator(space: FockSpace, mode: Mode, kind: OperatorKind) -> Result<FockOperator, FockError> {
    space.check_mode(mode)?;
    let n = space.cutoff();
    let a = ladder_1mode(n);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let single = match kind {
        OperatorKind::Annihilate => a,
        OperatorKind::Create => a.adjoint(),
        OperatorKind::Position => (&a + a.adjoint()) * C64::from(r2),
        OperatorKind::Momentum => (&a - a.adjoint()) * C64::new(0.0, -r2),
        OperatorKind::Number => a.adjoint() * &a,
    };
    let op = FockOperator { space: FockSpace::single(n)?, matrix: single };
    if space.modes() == 1 {
        Ok(op)
    } else {
        op.on_mode(mode)
    }
}

/// Left-to-right product `ops[0] · ops[1] · …`.
pub fn compose(ops: &[&FockOperator]) -> Result<FockOperator, FockError> {
    let (first, rest) = ops.split_first().ok_or(FockError::DimensionMismatch { expected: 1, found: 0 })?;
    rest.iter().try_fold((*first).clone(), |acc, op| acc.mul(op))
}

/// Matrix exponential (scaling and squaring, degree-13 Padé).
pub fn matrix_exp(op: &FockOperator) -> Result<FockOperator, FockError> {
    check_finite(&op.matrix)?;
    Ok(FockOperator { space: op.space, matrix: matrix_exp_dense(&op.matrix) })
}

/// Operator-norm (largest singular value) distance of the blocks with all
/// occupations `≤ k`.
pub fn inner_block_distance(a: &FockOperator, b: &FockOperator, k: usize) -> Result<f64, FockError> {
    a.same_space(b)?;
    if k >= a.space.cutoff() {
        return Err(FockError::InvalidBlock { k, cutoff: a.space.cutoff() });
    }
    let d = a.inner_block(k)? - b.inner_block(k)?;
    Ok(spectral_norm(&d))
}

pub(crate) fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::from(re)
    }

    fn inner_residual(m: &DMatrix<C64>, target: &DMatrix<C64>, space: FockSpace, k: usize) -> f64 {
        let idx = space.inner_indices(k);
        let mut worst: f64 = 0.0;
        for &i in &idx {
            for &j in &idx {
                worst = worst.max((m[(i, j)] - target[(i, j)]).norm());
            }
        }
        worst
    }

    #[test]
    fn ladder_entries() {
        let s = FockSpace::single(2).unwrap();
        let a = mode_operator(s, Mode::A, OperatorKind::Annihilate).unwrap();
        assert_eq!(a.entry(&[0], &[1]), Some(c(1.0)));
        assert!((a.entry(&[1], &[2]).unwrap() - c(2f64.sqrt())).norm() < 1e-15);
        let n = mode_operator(FockSpace::single(3).unwrap(), Mode::A, OperatorKind::Number).unwrap();
        for k in 0..4 {
            assert!((n.matrix()[(k, k)] - c(k as f64)).norm() < 1e-15);
        }
        assert_eq!(
            mode_operator(s, Mode::B, OperatorKind::Create),
            Err(FockError::ModeNotPresent(Mode::B))
        );
    }

    #[test]
    fn canonical_commutators_on_inner_block() {
        for space in [FockSpace::single(8).unwrap(), FockSpace::two(6).unwrap()] {
            for mode in [Mode::A, Mode::B].into_iter().filter(|m| space.has_mode(*m)) {
                let q = mode_operator(space, mode, OperatorKind::Position).unwrap();
                let p = mode_operator(space, mode, OperatorKind::Momentum).unwrap();
                let comm = q.commutator(&p).unwrap();
                let target = FockOperator::identity(space).scale(C64::i());
                let k = space.cutoff() - 1;
                assert!(inner_residual(comm.matrix(), target.matrix(), space, k) < 1e-12);
                let a = mode_operator(space, mode, OperatorKind::Annihilate).unwrap();
                let ad = mode_operator(space, mode, OperatorKind::Create).unwrap();
                let comm = a.commutator(&ad).unwrap();
                let id = FockOperator::identity(space);
                assert!(inner_residual(comm.matrix(), id.matrix(), space, k) < 1e-12);
            }
        }
    }

    #[test]
    fn distinct_modes_commute_exactly() {
        let s = FockSpace::two(5).unwrap();
        for ka in [OperatorKind::Annihilate, OperatorKind::Position, OperatorKind::Number] {
            for kb in [OperatorKind::Create, OperatorKind::Momentum] {
                let x = mode_operator(s, Mode::A, ka).unwrap();
                let y = mode_operator(s, Mode::B, kb).unwrap();
                assert!(x.commutator(&y).unwrap().max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn parity_and_zero_exponential() {
        let s = FockSpace::single(3).unwrap();
        let z = matrix_exp(&FockOperator::zeros(s)).unwrap();
        assert_eq!(z, FockOperator::identity(s));
        let n = mode_operator(s, Mode::A, OperatorKind::Number).unwrap();
        let p = matrix_exp(&n.scale(C64::new(0.0, std::f64::consts::PI))).unwrap();
        for k in 0..4 {
            let expect = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((p.matrix()[(k, k)] - c(expect)).norm() < 1e-14);
        }
    }

    #[test]
    fn compose_and_mismatch() {
        let s = FockSpace::single(4).unwrap();
        let a = mode_operator(s, Mode::A, OperatorKind::Annihilate).unwrap();
        assert_eq!(compose(&[&a]).unwrap(), a);
        let other = FockOperator::identity(FockSpace::single(5).unwrap());
        assert!(matches!(compose(&[&a, &other]), Err(FockError::SpaceMismatch(..))));
        assert!(matches!(a.add(&other), Err(FockError::SpaceMismatch(..))));
    }

    #[test]
    fn block_distance_trivia() {
        let s = FockSpace::two(4).unwrap();
        let id = FockOperator::identity(s);
        assert_eq!(inner_block_distance(&id, &id, 2).unwrap(), 0.0);
        let two = id.scale(c(2.0));
        assert!((inner_block_distance(&id, &two, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!(inner_block_distance(&id, &two, 4).is_err());
    }

    #[test]
    fn restrict_and_embed_round_trip() {
        let s = FockSpace::two(3).unwrap();
        let q = mode_operator(s, Mode::B, OperatorKind::Position).unwrap();
        let e = q.embed(5).unwrap();
        assert_eq!(e.restrict(3).unwrap(), q);
    }

    fn anti_hermitian(n: usize, seed: u64) -> DMatrix<C64> {
        // Deterministic pseudo-random entries, scaled to operator norm <= 5 below.
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let m = DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        &m - m.adjoint()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn exp_inverse_is_exp_of_negative(seed in any::<u64>(), norm in 0.1f64..5.0) {
            let s = FockSpace::single(9).unwrap();
            let a = anti_hermitian(10, seed);
            let a = &a * C64::from(norm / spectral_norm(&a));
            let op = FockOperator::new(s, a).unwrap();
            let e = matrix_exp(&op).unwrap();
            let f = matrix_exp(&op.scale(c(-1.0))).unwrap();
            let prod = e.mul(&f).unwrap();
            let d = prod.sub(&FockOperator::identity(s)).unwrap();
            prop_assert!(spectral_norm(d.matrix()) <= 1e-10);
        }
    }
}

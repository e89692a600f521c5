use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::{FockError, FockOperator, FockSpace, FockState, Mode, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    Lower,
    Raise,
}

/// `coeff · f_1 f_2 … f_k`; the rightmost factor acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    pub coeff: C64,
    pub factors: Vec<(Mode, Ladder)>,
}

/// Polynomial in `a, a†, b, b†` with the operator ordering kept as written.
/// Materialized on a truncated space every factor is the truncated ladder
/// matrix, so the result equals the product of truncated matrices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LadderExpr {
    terms: Vec<LadderTerm>,
}

impl LadderExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: C64) -> Self {
        Self { terms: vec![LadderTerm { coeff: c, factors: vec![] }] }
    }

    pub fn lower(mode: Mode) -> Self {
        Self { terms: vec![LadderTerm { coeff: C64::new(1.0, 0.0), factors: vec![(mode, Ladder::Lower)] }] }
    }

    pub fn raise(mode: Mode) -> Self {
        Self { terms: vec![LadderTerm { coeff: C64::new(1.0, 0.0), factors: vec![(mode, Ladder::Raise)] }] }
    }

    /// `(a + a†)/√2`.
    pub fn position(mode: Mode) -> Self {
        (Self::lower(mode) + Self::raise(mode)) * C64::from(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// `(a − a†)/(i√2)`.
    pub fn momentum(mode: Mode) -> Self {
        (Self::lower(mode) - Self::raise(mode)) * C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn number(mode: Mode) -> Self {
        Self::raise(mode) * Self::lower(mode)
    }

    pub fn terms(&self) -> &[LadderTerm] {
        &self.terms
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::scalar(C64::new(1.0, 0.0)), |acc, _| acc * self.clone())
    }

    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| LadderTerm {
                coeff: t.coeff.conj(),
                factors: t
                    .factors
                    .iter()
                    .rev()
                    .map(|&(m, l)| (m, if l == Ladder::Lower { Ladder::Raise } else { Ladder::Lower }))
                    .collect(),
            })
            .collect();
        Self { terms }
    }

    /// Merges identical words and drops zero coefficients.
    pub fn simplified(&self) -> Self {
        let mut map: BTreeMap<Vec<(Mode, Ladder)>, C64> = BTreeMap::new();
        for t in &self.terms {
            *map.entry(t.factors.clone()).or_default() += t.coeff;
        }
        Self {
            terms: map
                .into_iter()
                .filter(|(_, c)| *c != C64::new(0.0, 0.0))
                .map(|(factors, coeff)| LadderTerm { coeff, factors })
                .collect(),
        }
    }

    fn check_space(&self, space: FockSpace) -> Result<(), FockError> {
        for t in &self.terms {
            for &(m, _) in &t.factors {
                space.check_mode(m)?;
            }
        }
        Ok(())
    }

    /// Sparse matrix of the truncated product on `space`.
    pub fn compile(&self, space: FockSpace) -> Result<SparseAction, FockError> {
        self.check_space(space)?;
        let dim = space.dim();
        let n_max = space.cutoff();
        let mut columns: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        let mut scratch: BTreeMap<usize, C64> = BTreeMap::new();
        for (col, entries) in columns.iter_mut().enumerate() {
            scratch.clear();
            let start = space.occupations(col);
            'term: for t in &self.terms {
                let mut occ = start;
                let mut amp = t.coeff;
                for &(m, l) in t.factors.iter().rev() {
                    let n = &mut occ[m.index()];
                    match l {
                        Ladder::Lower => {
                            if *n == 0 {
                                continue 'term;
                            }
                            amp *= (*n as f64).sqrt();
                            *n -= 1;
                        }
                        Ladder::Raise => {
                            if *n == n_max {
                                continue 'term;
                            }
                            *n += 1;
                            amp *= (*n as f64).sqrt();
                        }
                    }
                }
                let row = space.index(&occ[..space.modes()]).expect("in range");
                *scratch.entry(row).or_default() += amp;
            }
            entries.extend(scratch.iter().filter(|(_, v)| v.norm() > 0.0).map(|(r, v)| (*r, *v)));
        }
        Ok(SparseAction::from_columns(dim, columns))
    }

    pub fn to_operator(&self, space: FockSpace) -> Result<FockOperator, FockError> {
        FockOperator::new(space, self.compile(space)?.to_dense())
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState, FockError> {
        let action = self.compile(state.space())?;
        let v = action.apply(&DMatrix::from_column_slice(state.space().dim(), 1, state.amplitudes().as_slice()));
        FockState::new(state.space(), DVector::from_column_slice(v.as_slice()))
    }
}

impl Add for LadderExpr {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for LadderExpr {
    type Output = Self;
    fn neg(self) -> Self {
        self * C64::from(-1.0)
    }
}

impl Sub for LadderExpr {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<C64> for LadderExpr {
    type Output = Self;
    fn mul(mut self, c: C64) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }
}

impl Mul<f64> for LadderExpr {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        self * C64::from(c)
    }
}

impl Mul for LadderExpr {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                let mut factors = l.factors.clone();
                factors.extend_from_slice(&r.factors);
                terms.push(LadderTerm { coeff: l.coeff * r.coeff, factors });
            }
        }
        Self { terms }.simplified()
    }
}

/// Compressed-column sparse matrix used to apply ladder polynomials to blocks
/// of vectors without forming dense operators.
#[derive(Debug, Clone)]
pub struct SparseAction {
    dim: usize,
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseAction {
    fn from_columns(dim: usize, columns: Vec<Vec<(usize, C64)>>) -> Self {
        let mut col_ptr = Vec::with_capacity(dim + 1);
        let mut rows = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for col in columns {
            for (r, v) in col {
                rows.push(r);
                vals.push(v);
            }
            col_ptr.push(rows.len());
        }
        Self { dim, col_ptr, rows, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for c in 0..self.dim {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                m[(self.rows[k], c)] += self.vals[k];
            }
        }
        m
    }

    /// Largest absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|c| self.vals[self.col_ptr[c]..self.col_ptr[c + 1]].iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `self · block` for a `dim × k` block.
    pub fn apply(&self, block: &DMatrix<C64>) -> DMatrix<C64> {
        assert_eq!(block.nrows(), self.dim, "sparse apply shape mismatch");
        let mut out = DMatrix::zeros(self.dim, block.ncols());
        for j in 0..block.ncols() {
            let x = block.column(j);
            let mut y = out.column_mut(j);
            for c in 0..self.dim {
                let xc = x[c];
                if xc == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                    y[self.rows[k]] += self.vals[k] * xc;
                }
            }
        }
        out
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `exp(A)·block` by truncated Taylor series with scaling: the exponent is
/// split into `s` steps of 1-norm at most 6 and each step is summed until the
/// terms stop contributing at double precision.
pub fn expm_action(a: &SparseAction, block: &DMatrix<C64>) -> DMatrix<C64> {
    const STEP_NORM: f64 = 6.0;
    const MAX_TERMS: usize = 80;
    let norm = a.one_norm();
    let steps = ((norm / STEP_NORM).ceil() as usize).max(1);
    let inv = 1.0 / steps as f64;
    let mut f = block.clone();
    for _ in 0..steps {
        let mut term = f.clone();
        let mut acc = f.clone();
        let mut small_run = 0;
        for k in 1..=MAX_TERMS {
            term = a.apply(&term) * C64::from(inv / k as f64);
            acc += &term;
            if max_abs(&term) <= f64::EPSILON * 0.25 * max_abs(&acc) {
                small_run += 1;
                if small_run == 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        f = acc;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{matrix_exp, mode_operator, OperatorKind};

    #[test]
    fn materializes_like_dense_products() {
        let s = FockSpace::two(5).unwrap();
        let e = LadderExpr::lower(Mode::A) * LadderExpr::raise(Mode::B) * 2.0 - LadderExpr::number(Mode::A);
        let a = mode_operator(s, Mode::A, OperatorKind::Annihilate).unwrap();
        let bd = mode_operator(s, Mode::B, OperatorKind::Create).unwrap();
        let n = mode_operator(s, Mode::A, OperatorKind::Number).unwrap();
        let dense = a.mul(&bd).unwrap().scale(C64::from(2.0)).sub(&n).unwrap();
        assert!(e.to_operator(s).unwrap().sub(&dense).unwrap().max_abs() < 1e-14);
        let q = LadderExpr::position(Mode::B).to_operator(s).unwrap();
        let qd = mode_operator(s, Mode::B, OperatorKind::Position).unwrap();
        assert!(q.sub(&qd).unwrap().max_abs() < 1e-15);
        let p = LadderExpr::momentum(Mode::A).to_operator(s).unwrap();
        let pd = mode_operator(s, Mode::A, OperatorKind::Momentum).unwrap();
        assert!(p.sub(&pd).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn adjoint_matches_dense_adjoint() {
        let s = FockSpace::two(4).unwrap();
        let e = LadderExpr::lower(Mode::A) * LadderExpr::lower(Mode::B) * C64::new(0.3, 0.7)
            + LadderExpr::raise(Mode::A).pow(2) * C64::new(-1.0, 0.2);
        let lhs = e.adjoint().to_operator(s).unwrap();
        let rhs = e.to_operator(s).unwrap().adjoint();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn rejects_missing_mode() {
        let s = FockSpace::single(3).unwrap();
        assert!(LadderExpr::lower(Mode::B).compile(s).is_err());
    }

    #[test]
    fn expm_action_matches_dense_exponential() {
        let s = FockSpace::two(7).unwrap();
        let g = (LadderExpr::lower(Mode::A) * LadderExpr::raise(Mode::B)
            - LadderExpr::raise(Mode::A) * LadderExpr::lower(Mode::B))
            * 0.9
            + (LadderExpr::lower(Mode::B).pow(2) - LadderExpr::raise(Mode::B).pow(2)) * 0.4;
        let dense = matrix_exp(&g.to_operator(s).unwrap()).unwrap();
        let block = DMatrix::from_fn(s.dim(), 3, |i, j| C64::new(((i * 7 + j) % 5) as f64 - 2.0, (i % 3) as f64));
        let via_action = expm_action(&g.compile(s).unwrap(), &block);
        let via_dense = dense.matrix() * &block;
        assert!(max_abs(&(via_action - via_dense)) < 1e-12);
    }
}

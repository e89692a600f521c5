use fock_core::{FockOperator, FockSpace, Mode};
use nalgebra::DMatrix;

use crate::padded::{rotate_apply, squeeze_apply};
use crate::{FresnelParams, GaussianError, C64};

/// `exp(c x²)` for `x = a†` as a lower-triangular matrix, exact at any cutoff:
/// `⟨n+2k| … |n⟩ = c^k/k! · √((n+2k)!/n!)`.
fn raising_quadratic_exp(cutoff: usize, c: C64) -> DMatrix<C64> {
    let dim = cutoff + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        let mut t = C64::new(1.0, 0.0);
        let mut k = 0;
        while n + 2 * k < dim {
            m[(n + 2 * k, n)] = t;
            k += 1;
            let hi = (n + 2 * k) as f64;
            t *= c / k as f64 * ((hi - 1.0) * hi).sqrt();
        }
    }
    m
}

/// One-mode `F(s, r) = (1/√s*) exp(−r a†²/2s*) (1/s*)^{a†a} exp(r* a²/2s*)` at `cutoff`.
///
/// Every element is exact: the annihilation factor only lowers, so no truncated
/// state feeds back. The alternating sum over intermediate occupations loses
/// precision when both indices are large (beyond about 40 at `|r| = 1`); use
/// [`EulerFresnel`] for vectors with large occupations.
pub fn fresnel_matrix(cutoff: usize, p: &FresnelParams) -> DMatrix<C64> {
    let sc = p.s().conj();
    let raise = raising_quadratic_exp(cutoff, -p.r() / (2.0 * sc));
    let lower = raising_quadratic_exp(cutoff, p.r().conj() / (2.0 * sc)).transpose();
    let inv = sc.inv();
    let mut diag_lower = lower;
    let mut phase = C64::new(1.0, 0.0);
    for mut row in diag_lower.row_iter_mut() {
        row *= phase;
        phase *= inv;
    }
    fock_core::cmul(&raise, &diag_lower) * sc.sqrt().inv()
}

/// `F(s, r)` acting on `mode`.
pub fn fresnel_operator(space: FockSpace, mode: Mode, p: &FresnelParams) -> Result<FockOperator, GaussianError> {
    space.check_mode(mode)?;
    let single = FockOperator::new(FockSpace::single(space.cutoff())?, fresnel_matrix(space.cutoff(), p))?;
    Ok(if space.modes() == 1 { single } else { single.on_mode(mode)? })
}

/// Decomposition `F(s, r) = c · R(α) S(λ) R(β)` with `R(φ) = exp(−iφ a†a)` and
/// `S(λ) = exp (λ/2)(a² − a†²)`, where `cosh λ = |s|`, `s* = cosh λ e^{i(α+β)}`,
/// `r = sinh λ e^{i(β−α)}`, and `c = √(cosh λ)/√s*` matches `⟨0|F|0⟩ = 1/√s*`.
/// Every factor is numerically stable, so this realizes `F` on vectors with
/// large occupations where the factored form cancels catastrophically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerFresnel {
    pub phase: C64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl EulerFresnel {
    pub fn new(p: &FresnelParams) -> Self {
        let arg_s = p.s().arg();
        let arg_r = if p.r().norm() > 0.0 { p.r().arg() } else { 0.0 };
        let lambda = p.r().norm().asinh();
        let phase = C64::from(lambda.cosh().sqrt()) / p.s().conj().sqrt();
        Self { phase, alpha: 0.5 * (-arg_s - arg_r), beta: 0.5 * (-arg_s + arg_r), lambda }
    }

    /// `F·v`; the result has as many rows as the padding required.
    pub fn apply(&self, v: &DMatrix<C64>) -> DMatrix<C64> {
        let w = rotate_apply(self.beta, v);
        let w = squeeze_apply(self.lambda, &w);
        rotate_apply(self.alpha, &w) * self.phase
    }

    /// `F†·v`.
    pub fn apply_adjoint(&self, v: &DMatrix<C64>) -> DMatrix<C64> {
        let w = rotate_apply(-self.alpha, v);
        let w = squeeze_apply(-self.lambda, &w);
        rotate_apply(-self.beta, &w) * self.phase.conj()
    }
}

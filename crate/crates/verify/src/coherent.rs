use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use fock_core::{basis_state, inner, FockOperator, FockSpace, FockState, ModeSpec};
use gaussian_unitaries::RayMatrix;
use ices_numerics::hermite_poly;

use crate::{ParamValue, Probe, VerifyError, C64};

/// `⟨z′|z⟩ = Π exp(z′* z − |z′|²/2 − |z|²/2)`.
pub fn coherent_overlap(bra: [C64; 2], ket: [C64; 2]) -> C64 {
    bra.iter()
        .zip(&ket)
        .map(|(b, k)| (b.conj() * k - 0.5 * (b.norm_sqr() + k.norm_sqr())).exp())
        .product()
}

/// Two-mode coherent state in `space`, subject to the leakage guard.
pub fn coherent_state(space: FockSpace, z: [C64; 2]) -> Result<FockState, VerifyError> {
    Ok(basis_state(space, &[ModeSpec::Coherent(z[0]), ModeSpec::Coherent(z[1])])?)
}

/// `⟨z′_a, z′_b| op |z_a, z_b⟩` with truncated coherent states.
pub fn coherent_matrix_element(op: &FockOperator, probe: &Probe) -> Result<C64, VerifyError> {
    let space = op.space();
    let bra = coherent_state(space, probe.bra)?;
    let ket = coherent_state(space, probe.ket)?;
    Ok(inner(&bra, &op.apply(&ket)?)?)
}

/// `c + Σ_i w_i v_i` over `v = (z′_a*, z′_b*, z_a, z_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSymbol {
    pub weights: [C64; 4],
    pub constant: C64,
}

impl LinearSymbol {
    /// Symbol of `α a + β a† + γ b + δ b† + c`.
    pub fn from_ladder(alpha: C64, beta: C64, gamma: C64, delta: C64, constant: C64) -> Self {
        Self { weights: [beta, delta, alpha, gamma], constant }
    }

    pub fn evaluate(&self, v: [C64; 4]) -> C64 {
        self.constant + self.weights.iter().zip(&v).map(|(w, x)| w * x).sum::<C64>()
    }
}

/// Outer function applied to the linear symbol `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolShape {
    /// `exp ℓ`.
    Exp,
    /// `exp(κ ℓ²)`.
    ExpSquare { kappa: C64 },
    /// `scale^n H_n(arg_scale · ℓ)`.
    Hermite { n: usize, scale: C64, arg_scale: C64 },
}

/// Normal-ordered operator `:prefactor · shape(ℓ):` acting through
/// `⟨z′| :F: |z⟩ = F(z′*, z) ⟨z′|z⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalSymbol {
    pub prefactor: C64,
    pub linear: LinearSymbol,
    pub shape: SymbolShape,
}

impl NormalSymbol {
    /// `F(z′*, z)` at `v = (z′_a*, z′_b*, z_a, z_b)`.
    pub fn evaluate(&self, v: [C64; 4]) -> C64 {
        let l = self.linear.evaluate(v);
        let f = match self.shape {
            SymbolShape::Exp => l.exp(),
            SymbolShape::ExpSquare { kappa } => (kappa * l * l).exp(),
            SymbolShape::Hermite { n, scale, arg_scale } => scale.powu(n as u32) * hermite_poly(n, arg_scale * l),
        };
        self.prefactor * f
    }

    pub fn matrix_element(&self, probe: &Probe) -> C64 {
        let v = [probe.bra[0].conj(), probe.bra[1].conj(), probe.ket[0], probe.ket[1]];
        self.evaluate(v) * coherent_overlap(probe.bra, probe.ket)
    }

    /// Prefactor, linear weights and shape constants by name.
    pub fn coefficients(&self) -> BTreeMap<String, ParamValue> {
        let mut m = BTreeMap::new();
        m.insert("prefactor".into(), self.prefactor.into());
        for (name, w) in ["w_conj_za", "w_conj_zb", "w_za", "w_zb"].iter().zip(&self.linear.weights) {
            m.insert((*name).into(), (*w).into());
        }
        m.insert("constant".into(), self.linear.constant.into());
        match self.shape {
            SymbolShape::Exp => {}
            SymbolShape::ExpSquare { kappa } => {
                m.insert("kappa".into(), kappa.into());
            }
            SymbolShape::Hermite { n, scale, arg_scale } => {
                m.insert("n".into(), n.into());
                m.insert("scale".into(), scale.into());
                m.insert("arg_scale".into(), arg_scale.into());
            }
        }
        m
    }
}

/// Symbol of `X = D(Q_b − Q_a) − B(P_b − P_a) = [(D + iB)(b − a) + (D − iB)(b† − a†)]/√2`.
pub fn x_symbol(m: &RayMatrix) -> LinearSymbol {
    difference_symbol(C64::new(m.d(), m.b()), C64::new(m.d(), -m.b()))
}

/// Symbol of `Y = A(P_b − P_a) − C(Q_b − Q_a) = [(−iA − C)(b − a) + (iA − C)(b† − a†)]/√2`.
pub fn y_symbol(m: &RayMatrix) -> LinearSymbol {
    difference_symbol(C64::new(-m.c(), -m.a()), C64::new(-m.c(), m.a()))
}

/// `[u(b − a) + w(b† − a†)]/√2`.
fn difference_symbol(u: C64, w: C64) -> LinearSymbol {
    let (u, w) = (u * FRAC_1_SQRT_2, w * FRAC_1_SQRT_2);
    LinearSymbol::from_ladder(-u, -w, u, w, C64::new(0.0, 0.0))
}

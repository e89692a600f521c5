use nalgebra::{DMatrix, DVector};

use crate::{FockError, FockSpace, C64};

/// Poisson tail mass above the cutoff tolerated by [`basis_state`] for coherent amplitudes.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-8;

/// Amplitude vector on a truncated space. States need not be normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    space: FockSpace,
    amplitudes: DVector<C64>,
}

impl FockState {
    pub fn new(space: FockSpace, amplitudes: DVector<C64>) -> Result<Self, FockError> {
        if amplitudes.len() != space.dim() {
            return Err(FockError::DimensionMismatch { expected: space.dim(), found: amplitudes.len() });
        }
        if !amplitudes.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(FockError::NonFinite("state"));
        }
        Ok(Self { space, amplitudes })
    }

    pub fn zeros(space: FockSpace) -> Self {
        Self { space, amplitudes: DVector::zeros(space.dim()) }
    }

    pub fn basis(space: FockSpace, occ: &[usize]) -> Result<Self, FockError> {
        let idx = space.index(occ).ok_or(FockError::NumberOutOfRange {
            n: occ.iter().copied().max().unwrap_or(0),
            cutoff: space.cutoff(),
        })?;
        let mut s = Self::zeros(space);
        s.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, occ: &[usize]) -> Option<C64> {
        self.space.index(occ).map(|i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self, FockError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(FockError::ZeroNorm);
        }
        Ok(self.scale(C64::from(1.0 / n)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { space: self.space, amplitudes: &self.amplitudes * c }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        if self.space != other.space {
            return Err(FockError::SpaceMismatch(self.space, other.space));
        }
        Ok(Self { space: self.space, amplitudes: &self.amplitudes + &other.amplitudes })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        self.add(&other.scale(C64::from(-1.0)))
    }

    /// `|ψ_a⟩ ⊗ |ψ_b⟩` for two one-mode states of equal cutoff.
    pub fn tensor(a: &Self, b: &Self) -> Result<Self, FockError> {
        if a.space.modes() != 1 || a.space != b.space {
            return Err(FockError::SpaceMismatch(a.space, b.space));
        }
        let space = FockSpace::two(a.space.cutoff())?;
        Ok(Self { space, amplitudes: a.amplitudes.kronecker(&b.amplitudes) })
    }

    /// Components with all occupations `≤ k`, as a state on the smaller space.
    pub fn restrict(&self, k: usize) -> Result<Self, FockError> {
        if k > self.space.cutoff() {
            return Err(FockError::InvalidBlock { k, cutoff: self.space.cutoff() });
        }
        let space = self.space.with_cutoff(k)?;
        let amps = DVector::from_iterator(
            space.dim(),
            (0..space.dim()).map(|i| self.amplitudes[space.map_index(i, &self.space).expect("fits")]),
        );
        Ok(Self { space, amplitudes: amps })
    }

    /// Zero-padded copy on a larger cutoff.
    pub fn embed(&self, cutoff: usize) -> Result<Self, FockError> {
        if cutoff < self.space.cutoff() {
            return Err(FockError::InvalidBlock { k: cutoff, cutoff: self.space.cutoff() });
        }
        let space = self.space.with_cutoff(cutoff)?;
        let mut amps = DVector::zeros(space.dim());
        for i in 0..self.space.dim() {
            amps[self.space.map_index(i, &space).expect("fits")] = self.amplitudes[i];
        }
        Ok(Self { space, amplitudes: amps })
    }

    /// Two-mode coefficient matrix `c[n_a, n_b]`.
    pub fn coefficient_matrix(&self) -> Result<DMatrix<C64>, FockError> {
        if self.space.modes() != 2 {
            return Err(FockError::UnsupportedModes(self.space.modes()));
        }
        let n = self.space.cutoff() + 1;
        Ok(DMatrix::from_fn(n, n, |i, j| self.amplitudes[i * n + j]))
    }
}

/// Per-mode state description for [`basis_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeSpec {
    Vacuum,
    Number(usize),
    Coherent(C64),
    /// Position eigenket `|q⟩`, `⟨n|q⟩ = ψ_n(q)`.
    Position(f64),
    /// Momentum eigenket `|p⟩`, `⟨n|p⟩ = iⁿ ψ_n(p)`.
    Momentum(f64),
}

/// `e^{-|z|²/2} zⁿ/√n!` for `n = 0..=cutoff`.
pub fn coherent_amplitudes(cutoff: usize, z: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut c = C64::from((-0.5 * z.norm_sqr()).exp());
    out.push(c);
    for n in 1..=cutoff {
        c *= z / (n as f64).sqrt();
        out.push(c);
    }
    out
}

/// Poisson mass `Σ_{n>cutoff} e^{-|z|²}|z|^{2n}/n!`, summed directly.
pub fn coherent_tail_mass(cutoff: usize, z: C64) -> f64 {
    let x = z.norm_sqr();
    let mut term = (-x).exp();
    for n in 1..=cutoff {
        term *= x / n as f64;
    }
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        term *= x / n as f64;
        tail += term;
        if term <= 1e-18 * tail.max(1e-300) || term == 0.0 {
            break;
        }
        n += 1;
    }
    tail
}

/// Whether a position or momentum ket at `x` lies in the range `|x| ≤ √(2N)/2`
/// where its truncation is considered faithful.
pub fn ket_in_trusted_range(cutoff: usize, x: f64) -> bool {
    x.abs() <= (2.0 * cutoff as f64).sqrt() / 2.0
}

/// One-mode amplitudes for a spec; rejects coherent states that leak.
pub fn single_mode_amplitudes(cutoff: usize, spec: ModeSpec) -> Result<Vec<C64>, FockError> {
    let zero = C64::new(0.0, 0.0);
    match spec {
        ModeSpec::Vacuum => {
            let mut v = vec![zero; cutoff + 1];
            v[0] = C64::new(1.0, 0.0);
            Ok(v)
        }
        ModeSpec::Number(n) => {
            if n > cutoff {
                return Err(FockError::NumberOutOfRange { n, cutoff });
            }
            let mut v = vec![zero; cutoff + 1];
            v[n] = C64::new(1.0, 0.0);
            Ok(v)
        }
        ModeSpec::Coherent(z) => {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(FockError::NonFinite("coherent amplitude"));
            }
            let tail = coherent_tail_mass(cutoff, z);
            if z.norm() > (cutoff as f64).sqrt() || tail > COHERENT_TAIL_LIMIT {
                return Err(FockError::Leakage { z, tail, cutoff });
            }
            Ok(coherent_amplitudes(cutoff, z))
        }
        ModeSpec::Position(q) => {
            if !q.is_finite() {
                return Err(FockError::NonFinite("position label"));
            }
            Ok(ices_numerics::hermite_functions(cutoff, q).into_iter().map(C64::from).collect())
        }
        ModeSpec::Momentum(p) => {
            if !p.is_finite() {
                return Err(FockError::NonFinite("momentum label"));
            }
            let phases = [C64::new(1.0, 0.0), C64::i(), C64::new(-1.0, 0.0), -C64::i()];
            Ok(ices_numerics::hermite_functions(cutoff, p)
                .into_iter()
                .enumerate()
                .map(|(n, v)| phases[n % 4] * v)
                .collect())
        }
    }
}

/// Product state from one spec per mode (mode `a` first).
pub fn basis_state(space: FockSpace, specs: &[ModeSpec]) -> Result<FockState, FockError> {
    if specs.len() != space.modes() {
        return Err(FockError::SpecCount { expected: space.modes(), found: specs.len() });
    }
    let n = space.cutoff();
    let first = DVector::from_vec(single_mode_amplitudes(n, specs[0])?);
    let amps = match specs.get(1) {
        None => first,
        Some(&s) => first.kronecker(&DVector::from_vec(single_mode_amplitudes(n, s)?)),
    };
    FockState::new(space, amps)
}

/// `⟨bra|ket⟩`.
pub fn inner(bra: &FockState, ket: &FockState) -> Result<C64, FockError> {
    if bra.space != ket.space {
        return Err(FockError::SpaceMismatch(bra.space, ket.space));
    }
    Ok(bra.amplitudes.dotc(&ket.amplitudes))
}

/// Fraction of the squared norm on basis states with some occupation `> cutoff − k`.
pub fn truncation_leakage(state: &FockState, k: usize) -> Result<f64, FockError> {
    let cutoff = state.space.cutoff();
    if k > cutoff {
        return Err(FockError::InvalidBlock { k, cutoff });
    }
    let total = state.amplitudes.norm_squared();
    if total == 0.0 {
        return Ok(0.0);
    }
    let edge = cutoff - k;
    let modes = state.space.modes();
    let outer: f64 = (0..state.space.dim())
        .filter(|&i| state.space.occupations(i)[..modes].iter().any(|&n| n > edge))
        .map(|i| state.amplitudes[i].norm_sqr())
        .sum();
    Ok(outer / total)
}

/// Relative distance `‖e^{iφ}u − v‖/‖v‖` over `indices`, with the phase fixed on
/// the largest-magnitude component of `v`.
pub fn phase_aligned_residual(u: &[C64], v: &[C64], indices: &[usize]) -> f64 {
    let pivot = indices
        .iter()
        .copied()
        .max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()))
        .expect("non-empty index set");
    let phase = if u[pivot].norm() > 0.0 {
        let r = v[pivot] / u[pivot];
        r / r.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let num: f64 = indices.iter().map(|&i| (phase * u[i] - v[i]).norm_sqr()).sum();
    let den: f64 = indices.iter().map(|&i| v[i].norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn eq5(z: C64, q: f64) -> C64 {
        // ⟨z|q⟩ = π^{-1/4} exp{−q²/2 − |z|²/2 + √2 q z* − z*²/2}
        let zc = z.conj();
        PI.powf(-0.25) * (-0.5 * q * q - 0.5 * z.norm_sqr() + 2f64.sqrt() * q * zc - 0.5 * zc * zc).exp()
    }

    #[test]
    fn vacuum_and_trivial_coherent() {
        let s = FockSpace::two(4).unwrap();
        let v = basis_state(s, &[ModeSpec::Vacuum, ModeSpec::Vacuum]).unwrap();
        assert_eq!(v.amplitudes()[0], C64::new(1.0, 0.0));
        assert_eq!(v.norm(), 1.0);
        let c = basis_state(s, &[ModeSpec::Coherent(C64::new(0.0, 0.0)), ModeSpec::Vacuum]).unwrap();
        assert_eq!(c, v);
    }

    #[test]
    fn coherent_position_overlap() {
        let s = FockSpace::single(32).unwrap();
        let z = C64::new(0.5, 0.0);
        let cz = basis_state(s, &[ModeSpec::Coherent(z)]).unwrap();
        let q = basis_state(s, &[ModeSpec::Position(0.3)]).unwrap();
        assert!((inner(&cz, &q).unwrap() - eq5(z, 0.3)).norm() < 1e-10);
    }

    #[test]
    fn coherent_overlaps_and_orthogonal_numbers() {
        let s = FockSpace::single(32).unwrap();
        let (z1, z2) = (C64::new(0.6, -0.3), C64::new(-0.2, 0.9));
        let a = basis_state(s, &[ModeSpec::Coherent(z1)]).unwrap();
        let b = basis_state(s, &[ModeSpec::Coherent(z2)]).unwrap();
        let expect = (z1.conj() * z2 - 0.5 * (z1.norm_sqr() + z2.norm_sqr())).exp();
        assert!((inner(&a, &b).unwrap() - expect).norm() < 1e-10);
        let n1 = basis_state(s, &[ModeSpec::Number(1)]).unwrap();
        let n2 = basis_state(s, &[ModeSpec::Number(2)]).unwrap();
        assert_eq!(inner(&n1, &n2).unwrap(), C64::new(0.0, 0.0));
        assert!((inner(&a, &a).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn leakage_guard_and_measure() {
        let err = basis_state(FockSpace::single(4).unwrap(), &[ModeSpec::Coherent(C64::new(1.9, 0.0))]);
        assert!(matches!(err, Err(FockError::Leakage { tail, .. }) if tail > 1e-8));
        let s = FockSpace::single(16).unwrap();
        let vac = basis_state(s, &[ModeSpec::Vacuum]).unwrap();
        assert_eq!(truncation_leakage(&vac, 1).unwrap(), 0.0);
        let coh = basis_state(s, &[ModeSpec::Coherent(C64::new(1.0, 0.0))]).unwrap();
        let leak = truncation_leakage(&coh, 2).unwrap();
        // Poisson oracle Σ_{n≥15} e^{-1}/n!
        let mut oracle = 0.0;
        let mut fact = (1..=15).map(|k| k as f64).product::<f64>();
        for n in 15..40 {
            if n > 15 {
                fact *= n as f64;
            }
            oracle += (-1f64).exp() / fact;
        }
        // The truncated state only carries n = 15, 16 of the tail.
        assert!(leak <= 1e-10 && (leak - oracle).abs() < 1e-2 * oracle);
        let top = basis_state(s, &[ModeSpec::Number(16)]).unwrap();
        assert_eq!(truncation_leakage(&top, 1).unwrap(), 1.0);
    }

    #[test]
    fn momentum_ket_is_fourier_of_position_ket() {
        // ⟨n|p⟩ = ∫dq e^{ipq}/√(2π) ⟨n|q⟩, so ⟨q|p⟩ = e^{ipq}/√(2π) on the truncated span.
        let s = FockSpace::single(40).unwrap();
        let p = basis_state(s, &[ModeSpec::Momentum(0.7)]).unwrap();
        let q = basis_state(s, &[ModeSpec::Position(-0.4)]).unwrap();
        let ov = inner(&q, &p).unwrap();
        let expect = C64::from_polar(1.0 / (2.0 * PI).sqrt(), 0.7 * -0.4);
        assert!((ov - expect).norm() < 0.05, "{ov} vs {expect}");
    }

    #[test]
    fn tensor_restrict_embed() {
        let s1 = FockSpace::single(3).unwrap();
        let a = basis_state(s1, &[ModeSpec::Number(1)]).unwrap();
        let b = basis_state(s1, &[ModeSpec::Number(2)]).unwrap();
        let ab = FockState::tensor(&a, &b).unwrap();
        assert_eq!(ab.amplitude(&[1, 2]), Some(C64::new(1.0, 0.0)));
        let big = ab.embed(5).unwrap();
        assert_eq!(big.amplitude(&[1, 2]), Some(C64::new(1.0, 0.0)));
        assert_eq!(big.restrict(3).unwrap(), ab);
    }

    proptest! {
        #[test]
        fn coherent_position_grid(zr in -0.7f64..0.7, zi in -0.7f64..0.7, q in -2.0f64..2.0) {
            let s = FockSpace::single(32).unwrap();
            let z = C64::new(zr, zi);
            let cz = basis_state(s, &[ModeSpec::Coherent(z)]).unwrap();
            let qk = basis_state(s, &[ModeSpec::Position(q)]).unwrap();
            prop_assert!((inner(&cz, &qk).unwrap() - eq5(z, q)).norm() <= 1e-8);
        }

        #[test]
        fn inner_is_sesquilinear(cr in -2.0f64..2.0, ci in -2.0f64..2.0, q in -1.5f64..1.5) {
            let s = FockSpace::single(10).unwrap();
            let c = C64::new(cr, ci);
            let u = basis_state(s, &[ModeSpec::Position(q)]).unwrap();
            let v = basis_state(s, &[ModeSpec::Momentum(q)]).unwrap();
            let lhs = inner(&u.scale(c), &v).unwrap();
            prop_assert!((lhs - c.conj() * inner(&u, &v).unwrap()).norm() < 1e-12);
            let rhs = inner(&u, &v.scale(c)).unwrap();
            prop_assert!((rhs - c * inner(&u, &v).unwrap()).norm() < 1e-12);
        }
    }
}

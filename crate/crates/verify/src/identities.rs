use fock_core::{expm_action, FockSpace, LadderExpr, Mode};
use gaussian_unitaries::RayMatrix;
use ices_numerics::hermite_poly;
use nalgebra::DMatrix;

use crate::coherent::{coherent_state, x_symbol, y_symbol, LinearSymbol, NormalSymbol, SymbolShape};
use crate::{x_operator, y_operator, ParamValue, Probe, ResidualRecord, Tolerance, VerifyError, C64};

/// Largest `D² + B²` (or `A² + C²`) accepted for the exponential identities,
/// which grow like `e^{σ/2}` and push probes toward the cutoff.
pub const MAX_QUADRATURE_WEIGHT: f64 = 4.0;
/// Largest power accepted for the Hermite identity.
pub const MAX_POWER: usize = 6;
/// Largest coherent probe amplitude.
pub const MAX_PROBE_AMPLITUDE: f64 = 0.8;

const BOX_STEP: usize = 16;
const BOX_CONVERGENCE: f64 = 1e-13;
const MAX_BOX_CUTOFF: usize = 160;

/// Normal-ordering identities checked through coherent probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorIdentity {
    /// `e^X e^{a+b} = :exp(X + (D² + B²)/2 + a + b):`.
    ExpX,
    /// `e^Y e^{a+b} = :exp(a + b + (A² + C²)/2 + Y):`.
    ExpY,
    /// `exp(−yX²) = :(1 + 2yσ)^{−1/2} exp(−yX²/(1 + 2yσ)):` with `σ = D² + B²`.
    GaussX { y: f64 },
    /// `Xⁿ = :(i√(σ/2))ⁿ H_n(X/(i√2 √σ)):`.
    PowerX { n: usize },
}

impl OperatorIdentity {
    pub fn claim(&self) -> &'static str {
        match self {
            Self::ExpX => "identity.exp_x",
            Self::ExpY => "identity.exp_y",
            Self::GaussX { .. } => "identity.gauss_x",
            Self::PowerX { .. } => "identity.power_x",
        }
    }

    fn validate(&self, m: &RayMatrix) -> Result<(), VerifyError> {
        let sigma_x = m.d() * m.d() + m.b() * m.b();
        let sigma_y = m.a() * m.a() + m.c() * m.c();
        match *self {
            Self::ExpX if sigma_x > MAX_QUADRATURE_WEIGHT => Err(VerifyError::InvalidInput(format!("D² + B² = {sigma_x} exceeds {MAX_QUADRATURE_WEIGHT}"))),
            Self::ExpY if sigma_y > MAX_QUADRATURE_WEIGHT => Err(VerifyError::InvalidInput(format!("A² + C² = {sigma_y} exceeds {MAX_QUADRATURE_WEIGHT}"))),
            Self::GaussX { y } if !(y > 0.0 && y.is_finite()) => Err(VerifyError::InvalidInput(format!("Gaussian weight y = {y} must be positive"))),
            Self::PowerX { n } if n > MAX_POWER => Err(VerifyError::InvalidInput(format!("power {n} exceeds {MAX_POWER}"))),
            _ => Ok(()),
        }
    }

    /// Normal-ordered right-hand side.
    pub fn rhs(&self, m: &RayMatrix) -> Result<NormalSymbol, VerifyError> {
        self.validate(m)?;
        let one = C64::new(1.0, 0.0);
        let sigma = m.d() * m.d() + m.b() * m.b();
        let shifted = |l: LinearSymbol, c: f64| LinearSymbol {
            weights: [l.weights[0], l.weights[1], l.weights[2] + 1.0, l.weights[3] + 1.0],
            constant: l.constant + c,
        };
        Ok(match *self {
            Self::ExpX => NormalSymbol { prefactor: one, linear: shifted(x_symbol(m), 0.5 * sigma), shape: SymbolShape::Exp },
            Self::ExpY => {
                let sigma_y = m.a() * m.a() + m.c() * m.c();
                NormalSymbol { prefactor: one, linear: shifted(y_symbol(m), 0.5 * sigma_y), shape: SymbolShape::Exp }
            }
            Self::GaussX { y } => {
                let den = 1.0 + 2.0 * y * sigma;
                NormalSymbol {
                    prefactor: C64::from(den.sqrt().recip()),
                    linear: x_symbol(m),
                    shape: SymbolShape::ExpSquare { kappa: C64::from(-y / den) },
                }
            }
            Self::PowerX { n } => NormalSymbol {
                prefactor: one,
                linear: x_symbol(m),
                shape: SymbolShape::Hermite {
                    n,
                    scale: C64::new(0.0, (0.5 * sigma).sqrt()),
                    // 1/(i√2 √σ)
                    arg_scale: C64::new(0.0, -1.0 / (2.0 * sigma).sqrt()),
                },
            },
        })
    }

    /// Operator side applied to the columns of `ket` in `space`.
    fn apply_lhs(&self, m: &RayMatrix, space: FockSpace, ket: &DMatrix<C64>) -> Result<DMatrix<C64>, VerifyError> {
        let sum = LadderExpr::lower(Mode::A) + LadderExpr::lower(Mode::B);
        Ok(match *self {
            Self::ExpX => expm_action(&x_operator(m).compile(space)?, &expm_action(&sum.compile(space)?, ket)),
            Self::ExpY => expm_action(&y_operator(m).compile(space)?, &expm_action(&sum.compile(space)?, ket)),
            Self::GaussX { y } => {
                let x = x_operator(m);
                expm_action(&((x.clone() * x) * -y).compile(space)?, ket)
            }
            Self::PowerX { n } => {
                let x = x_operator(m).compile(space)?;
                (0..n).fold(ket.clone(), |v, _| x.apply(&v))
            }
        })
    }

    fn params(&self) -> Vec<(&'static str, ParamValue)> {
        match *self {
            Self::GaussX { y } => vec![("y", y.into())],
            Self::PowerX { n } => vec![("n", n.into())],
            _ => vec![],
        }
    }
}

/// `⟨z′| LHS |z⟩` for every probe, in a two-mode box of `cutoff`.
fn lhs_elements(id: &OperatorIdentity, m: &RayMatrix, cutoff: usize, probes: &[Probe]) -> Result<Vec<C64>, VerifyError> {
    let space = FockSpace::two(cutoff)?;
    let mut kets = DMatrix::<C64>::zeros(space.dim(), probes.len());
    for (c, p) in probes.iter().enumerate() {
        kets.set_column(c, coherent_state(space, p.ket)?.amplitudes());
    }
    let out = id.apply_lhs(m, space, &kets)?;
    probes
        .iter()
        .enumerate()
        .map(|(c, p)| {
            let bra = coherent_state(space, p.bra)?;
            Ok(bra.amplitudes().iter().zip(out.column(c).iter()).map(|(b, v)| b.conj() * v).sum())
        })
        .collect()
}

/// Largest `|LHS − RHS| / |RHS|` over the coherent probes. The operator side is
/// evaluated in a two-mode box starting at the cutoff of `space` and grown
/// until the probe elements change by at most `1e−13` relative.
pub fn identity_check(
    id: OperatorIdentity,
    m: &RayMatrix,
    probes: &[Probe],
    space: FockSpace,
    tol: Tolerance,
) -> Result<ResidualRecord, VerifyError> {
    if probes.is_empty() {
        return Err(VerifyError::InvalidInput("identity checks need at least one probe".into()));
    }
    if probes.iter().any(|p| p.bra.iter().chain(&p.ket).any(|z| z.norm() > MAX_PROBE_AMPLITUDE)) {
        return Err(VerifyError::InvalidInput(format!("probe amplitudes must not exceed {MAX_PROBE_AMPLITUDE}")));
    }
    let symbol = id.rhs(m)?;
    let mut cutoff = space.cutoff();
    let mut lhs = lhs_elements(&id, m, cutoff, probes)?;
    loop {
        let next = lhs_elements(&id, m, cutoff + BOX_STEP, probes)?;
        cutoff += BOX_STEP;
        let change = lhs.iter().zip(&next).map(|(a, b)| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        lhs = next;
        if change <= BOX_CONVERGENCE || cutoff >= MAX_BOX_CUTOFF {
            break;
        }
    }
    let residual = lhs
        .iter()
        .zip(probes)
        .map(|(l, p)| {
            let r = symbol.matrix_element(p);
            (l - r).norm() / r.norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    let mut rec = ResidualRecord::new(id.claim(), residual, "largest relative difference of coherent matrix elements over the probes", tol)
        .with("A", m.a())
        .with("B", m.b())
        .with("C", m.c())
        .with("D", m.d())
        .with("probes", probes.len())
        .with("box_cutoff", cutoff);
    for (k, v) in id.params() {
        rec = rec.with(k, v);
    }
    for (k, v) in symbol.coefficients() {
        rec = rec.with(&format!("symbol.{k}"), v);
    }
    Ok(rec)
}

/// `H_n(x)` against `n!` times the `tⁿ` coefficient of `exp(2xt) · exp(−t²)`,
/// obtained by multiplying the two Taylor series.
pub fn hermite_generating_check(max_n: usize, xs: &[C64], tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    if xs.is_empty() {
        return Err(VerifyError::InvalidInput("hermite check needs sample points".into()));
    }
    let mut worst: f64 = 0.0;
    for &x in xs {
        // exp(2xt) coefficients (2x)^j/j!, exp(−t²) coefficients (−1)^m/m! at t^{2m}.
        let mut e = vec![C64::new(1.0, 0.0); max_n + 1];
        for j in 1..=max_n {
            e[j] = e[j - 1] * (2.0 * x) / j as f64;
        }
        let mut g = vec![0.0; max_n + 1];
        let mut c = 1.0;
        for mm in 0..=max_n / 2 {
            g[2 * mm] = c;
            c *= -1.0 / (mm + 1) as f64;
        }
        let mut factorial = 1.0;
        for n in 0..=max_n {
            if n > 0 {
                factorial *= n as f64;
            }
            let coeff: C64 = (0..=n).map(|j| e[j] * g[n - j]).sum();
            let series = coeff * factorial;
            let direct = hermite_poly(n, x);
            let scale = series.norm().max(direct.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((series - direct).norm() / scale);
        }
    }
    Ok(ResidualRecord::new("hermite.generating_function", worst, "largest relative difference to the series coefficients", tol)
        .with("max_n", max_n)
        .with("points", xs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{random_probes, seeded_rng};

    fn ray() -> RayMatrix {
        RayMatrix::from_abc(1.1, 0.5, -0.4).unwrap()
    }

    fn probes() -> Vec<Probe> {
        random_probes(&mut seeded_rng(11), 9, 0.8)
    }

    #[test]
    fn vacuum_element_of_exp_identity() {
        let m = RayMatrix::identity();
        let zero = Probe { bra: [C64::new(0.0, 0.0); 2], ket: [C64::new(0.0, 0.0); 2] };
        let sym = OperatorIdentity::ExpX.rhs(&m).unwrap();
        assert!((sym.matrix_element(&zero) - C64::from(0.5f64.exp())).norm() < 1e-15);
        let r = identity_check(OperatorIdentity::ExpX, &m, &[zero], FockSpace::two(20).unwrap(), Tolerance::pinned(1e-8)).unwrap();
        assert!(r.passed(), "{}", r.residual);
    }

    #[test]
    fn all_identities_hold_on_random_probes() {
        let s = FockSpace::two(24).unwrap();
        let mut ids = vec![OperatorIdentity::ExpX, OperatorIdentity::ExpY, OperatorIdentity::GaussX { y: 0.2 }];
        ids.extend((1..=6).map(|n| OperatorIdentity::PowerX { n }));
        for id in ids {
            let r = identity_check(id, &ray(), &probes(), s, Tolerance::pinned(1e-8)).unwrap();
            assert!(r.passed(), "{id:?} {}", r.residual);
        }
    }

    #[test]
    fn mode_swap_of_probe_labels_keeps_the_residual_small() {
        let s = FockSpace::two(24).unwrap();
        let swapped: Vec<Probe> = probes().iter().map(Probe::swapped).collect();
        for id in [OperatorIdentity::ExpX, OperatorIdentity::ExpY] {
            let a = identity_check(id, &ray(), &probes(), s, Tolerance::pinned(1e-8)).unwrap();
            let b = identity_check(id, &ray(), &swapped, s, Tolerance::pinned(1e-8)).unwrap();
            assert!(a.passed() && b.passed());
        }
    }

    #[test]
    fn wrong_constant_is_detected() {
        // Dropping the σ/2 term of the exponential identity is off by e^{σ/2}.
        let m = ray();
        let mut sym = OperatorIdentity::ExpX.rhs(&m).unwrap();
        sym.linear.constant = C64::new(0.0, 0.0);
        let p = probes()[0];
        let s = FockSpace::two(40).unwrap();
        let lhs = lhs_elements(&OperatorIdentity::ExpX, &m, s.cutoff(), &[p]).unwrap()[0];
        assert!((lhs - sym.matrix_element(&p)).norm() / lhs.norm() > 0.1);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        let s = FockSpace::two(20).unwrap();
        assert!(identity_check(OperatorIdentity::PowerX { n: 7 }, &ray(), &probes(), s, Tolerance::pinned(1.0)).is_err());
        assert!(identity_check(OperatorIdentity::GaussX { y: 0.0 }, &ray(), &probes(), s, Tolerance::pinned(1.0)).is_err());
        let far = Probe { bra: [C64::new(0.9, 0.0); 2], ket: [C64::new(0.0, 0.0); 2] };
        assert!(identity_check(OperatorIdentity::ExpX, &ray(), &[far], s, Tolerance::pinned(1.0)).is_err());
    }

    #[test]
    fn hermite_matches_generating_series() {
        let mut rng = seeded_rng(5);
        let xs: Vec<C64> = (0..20).map(|_| crate::disk_point(&mut rng, 2.0)).collect();
        let r = hermite_generating_check(12, &xs, Tolerance::pinned(1e-9)).unwrap();
        assert!(r.passed(), "{}", r.residual);
    }
}

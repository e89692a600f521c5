use ices_numerics::gauss_legendre_rule;
use fock_core::{inner, FockSpace, FockState};
use gaussian_unitaries::FresnelParams;
use ices_states::{ices, BuildMethod, IcesLabel};

use crate::{ResidualRecord, Tolerance, VerifyError, C64};

/// `exp[z′*z − (|z′|² + |z|²)/2]`.
pub fn coherent_factor(z_prime: C64, z: C64) -> C64 {
    (z_prime.conj() * z - 0.5 * (z_prime.norm_sqr() + z.norm_sqr())).exp()
}

/// Factorization of the overlap: `⟨ζ(z′,q′)|ζ(z,q)⟩ / ⟨ζ(0,q′)|ζ(0,q)⟩` against
/// the coherent factor. States come from the beam-splitter protocol, whose
/// truncated `B` is exactly unitary, so the ratio is exact up to the coherent
/// tail beyond the cutoff.
pub fn overlap_factorization(
    (z, q): (C64, f64),
    (z_prime, q_prime): (C64, f64),
    params: &FresnelParams,
    space: FockSpace,
    tol: Tolerance,
) -> Result<ResidualRecord, VerifyError> {
    let state = |z: C64, q: f64| -> Result<FockState, VerifyError> {
        Ok(ices(space, &IcesLabel::new(z, q, *params)?, BuildMethod::Protocol)?)
    };
    let zero = C64::new(0.0, 0.0);
    let num = inner(&state(z_prime, q_prime)?, &state(z, q)?)?;
    let den = inner(&state(zero, q_prime)?, &state(zero, q)?)?;
    let scale = state(zero, q_prime)?.norm() * state(zero, q)?.norm();
    if den.norm() <= 1e-13 * scale {
        return Err(VerifyError::VanishingDenominator("overlap factorization"));
    }
    let expected = coherent_factor(z_prime, z);
    let r = (num / den - expected).norm() / expected.norm();
    Ok(ResidualRecord::new("ices.overlap_factorization", r, "relative to the coherent factor", tol)
        .with("z", z)
        .with("q", q)
        .with("z_prime", z_prime)
        .with("q_prime", q_prime)
        .with("cutoff", space.cutoff()))
}

fn profile(z: C64, q: f64, params: &FresnelParams, space: FockSpace) -> Result<impl Fn(f64) -> Result<C64, VerifyError>, VerifyError> {
    let reference = ices(space, &IcesLabel::new(z, q, *params)?, BuildMethod::ClosedForm)?;
    let params = *params;
    Ok(move |qp: f64| -> Result<C64, VerifyError> {
        let other = ices(space, &IcesLabel::new(z, qp, params)?, BuildMethod::ClosedForm)?;
        Ok(inner(&other, &reference)?)
    })
}

/// Full width at half maximum of `|⟨ζ(z, q+Δ)|ζ(z, q)⟩|` in `Δ`, relative to the
/// value at `Δ = 0`.
fn half_width(f: &dyn Fn(f64) -> Result<C64, VerifyError>, q: f64, dir: f64) -> Result<f64, VerifyError> {
    const STEP: f64 = 0.02;
    const REACH: f64 = 6.0;
    let half = 0.5 * f(q)?.norm();
    let mut lo = 0.0;
    let mut hi = STEP;
    while f(q + dir * hi)?.norm() > half {
        lo = hi;
        hi += STEP;
        if hi > REACH {
            return Err(VerifyError::InvalidInput("overlap profile never falls to half its peak".into()));
        }
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if f(q + dir * mid)?.norm() > half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Truncation-regularized delta: the overlap profile in `q − q′` narrows as the
/// cutoff grows. The residual is the largest ratio of consecutive widths over
/// the increasing cutoffs, which must stay below 1. The integral of the profile
/// over `q′` is recorded for each cutoff.
pub fn nascent_delta_check(
    z: C64,
    q: f64,
    params: &FresnelParams,
    cutoffs: &[usize],
    tol: Tolerance,
) -> Result<ResidualRecord, VerifyError> {
    if cutoffs.len() < 2 || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VerifyError::InvalidInput("need at least two increasing cutoffs".into()));
    }
    let (nodes, weights) = gauss_legendre_rule(160)?;
    let mut widths = Vec::new();
    let mut integrals = Vec::new();
    for &n in cutoffs {
        let f = profile(z, q, params, FockSpace::two(n)?)?;
        widths.push(half_width(&f, q, 1.0)? + half_width(&f, q, -1.0)?);
        let mut acc = C64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(&weights) {
            acc += f(q + 8.0 * x)? * (8.0 * w);
        }
        integrals.push(acc.re);
    }
    let r = widths.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    Ok(ResidualRecord::new("ices.nascent_delta", r, "largest ratio of consecutive widths", tol)
        .with("z", z)
        .with("q", q)
        .with("cutoffs", cutoffs.iter().map(|&c| c as f64).collect::<Vec<_>>())
        .with("fwhm", widths)
        .with("integral_re", integrals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gaussian_unitaries::{fresnel_params_from_ray, RayMatrix};

    fn params() -> FresnelParams {
        fresnel_params_from_ray(&RayMatrix::from_abc(1.1, 0.4, -0.5).unwrap()).unwrap()
    }

    #[test]
    fn identical_coherent_labels_give_unit_ratio() {
        let z = C64::new(0.7, 0.0);
        let r = overlap_factorization((z, 0.2), (z, -0.4), &params(), FockSpace::two(16).unwrap(), Tolerance::pinned(1e-8)).unwrap();
        assert!(r.passed(), "{}", r.residual);
    }

    #[test]
    fn distinct_labels_match_coherent_factor() {
        let r = overlap_factorization(
            (C64::new(0.5, 0.0), 0.3),
            (C64::new(0.0, 0.2), 0.9),
            &params(),
            FockSpace::two(16).unwrap(),
            Tolerance::pinned(1e-7),
        )
        .unwrap();
        assert!(r.passed(), "{}", r.residual);
    }

    #[test]
    fn delta_narrows_with_cutoff() {
        let r = nascent_delta_check(C64::new(0.0, 0.0), 0.0, &FresnelParams::identity(), &[16, 24, 32], Tolerance::pinned(1.0)).unwrap();
        assert!(r.passed() && r.residual < 1.0, "{r:?}");
    }

    #[test]
    fn rejects_unordered_cutoffs() {
        assert!(nascent_delta_check(C64::new(0.0, 0.0), 0.0, &params(), &[16, 16], Tolerance::pinned(1.0)).is_err());
    }
}

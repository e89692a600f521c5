use fock_core::{FockSpace, FockState, LadderExpr, Mode};
use gaussian_unitaries::FresnelParams;
use ices_numerics::QuadratureScheme;
use ices_states::{ices, BuildMethod, IcesLabel};
use nalgebra::DMatrix;

use crate::util::{check_block, spectral_norm};
use crate::{ResidualRecord, Tolerance, VerifyError, C64};

/// Quadrature approximation of `∫dq ∫d²z/π |ζ⟩⟨ζ|` on the occupation `≤ k`
/// block.
///
/// The `z` dependence of the closed form is `e^{−|z|²/2} exp(z d†) ξ(q)` with
/// `d† = (a† + b†)/√2` and `ξ(q) = |ζ(0, q)⟩`, so on the block
/// `ζ = e^{−|z|²/2} Σ_j z^j v_j(q)` with `v_j = d†^j ξ / j!`, `j ≤ 2k`. The planar
/// sum then reduces to the moments `Σ w e^{−|z|²} z^j z̄^{j′}` of the same
/// nodes, which gives the identical quadrature sum at a fraction of the cost.
/// Raising-only series are exact on the block, so the block is computed in a
/// box of cutoff `k` whatever the cutoff of `space`.
pub fn completeness_block(params: &FresnelParams, scheme: &QuadratureScheme, k: usize) -> Result<DMatrix<C64>, VerifyError> {
    scheme.validate()?;
    let grid = scheme.z_rule.grid()?;
    let (q_nodes, q_weights) = scheme.q_rule.nodes_weights()?;
    let jmax = 2 * k;
    let mut moments = DMatrix::<C64>::zeros(jmax + 1, jmax + 1);
    for (z, w) in grid.nodes.iter().zip(&grid.weights) {
        let damp = w * (-z.norm_sqr()).exp();
        let powers: Vec<C64> = (0..=jmax).scan(C64::new(1.0, 0.0), |p, _| {
            let cur = *p;
            *p *= z;
            Some(cur)
        }).collect();
        for j in 0..=jmax {
            for l in 0..=jmax {
                moments[(j, l)] += powers[j] * powers[l].conj() * damp;
            }
        }
    }
    let box_space = FockSpace::two(k.max(1))?;
    let idx = box_space.inner_indices(k);
    let d_raise = (LadderExpr::raise(Mode::A) + LadderExpr::raise(Mode::B)) * std::f64::consts::FRAC_1_SQRT_2;
    let d_raise = d_raise.compile(box_space)?;
    let dim = idx.len();
    let mut total = DMatrix::<C64>::zeros(dim, dim);
    let zero = C64::new(0.0, 0.0);
    for (q, wq) in q_nodes.iter().zip(&q_weights) {
        let xi: FockState = ices(box_space, &IcesLabel::new(zero, *q, *params)?, BuildMethod::ClosedForm)?;
        let mut v = DMatrix::<C64>::zeros(box_space.dim(), jmax + 1);
        v.set_column(0, xi.amplitudes());
        for j in 1..=jmax {
            let prev = v.columns(j - 1, 1).into_owned();
            let next = d_raise.apply(&prev) * C64::from(1.0 / j as f64);
            v.set_column(j, &next.column(0));
        }
        let vk = DMatrix::from_fn(dim, jmax + 1, |r, c| v[(idx[r], c)]);
        total += (&vk * &moments * vk.adjoint()) * C64::from(*wq);
    }
    Ok(total)
}

fn spectral_distance_to_identity(m: &DMatrix<C64>) -> f64 {
    spectral_norm(&(m - DMatrix::<C64>::identity(m.nrows(), m.ncols())))
}

/// Block residual of the resolution of identity for `scheme` and for
/// `refinements` successively refined schemes. Returns the residual record for
/// `scheme` followed by a trend record whose residual is the largest ratio of
/// consecutive residuals, which must stay below 1.
pub fn completeness_check(
    params: &FresnelParams,
    scheme: &QuadratureScheme,
    space: FockSpace,
    k: usize,
    refinements: usize,
    tol: Tolerance,
) -> Result<Vec<ResidualRecord>, VerifyError> {
    if space.modes() != 2 {
        return Err(VerifyError::InvalidInput("completeness needs two modes".into()));
    }
    check_block(space, k)?;
    let mut residuals = Vec::with_capacity(refinements + 1);
    let mut s = *scheme;
    for i in 0..=refinements {
        if i > 0 {
            s = s.refined();
        }
        residuals.push(spectral_distance_to_identity(&completeness_block(params, &s, k)?));
    }
    let m = params.ray();
    let describe = |r: ResidualRecord| {
        r.with("A", m.a())
            .with("B", m.b())
            .with("C", m.c())
            .with("D", m.d())
            .with("k", k)
            .with("cutoff", space.cutoff())
            .with("q_order", scheme.q_rule.order)
            .with("z_radius", scheme.z_rule.radius)
            .with("z_radial", scheme.z_rule.n_radial)
            .with("z_angular", scheme.z_rule.n_angular)
            .with("trend", residuals.clone())
    };
    let mut out = vec![describe(ResidualRecord::new(
        "ices.completeness",
        residuals[0],
        "spectral norm of (sum - identity) on the occupation <= k block",
        tol,
    ))];
    if refinements > 0 {
        let ratio = residuals.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        out.push(describe(ResidualRecord::new(
            "ices.completeness.trend",
            ratio,
            "largest ratio of consecutive residuals under refinement",
            Tolerance::pinned(1.0),
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ices_numerics::{PlanarRule, QRule, Rule1d};

    #[test]
    fn vacuum_slice_and_block_converge() {
        let p = FresnelParams::identity();
        let scheme = QuadratureScheme::default();
        let s = FockSpace::two(10).unwrap();
        let recs = completeness_check(&p, &scheme, s, 0, 0, Tolerance::pinned(1e-3)).unwrap();
        assert!(recs[0].passed(), "{}", recs[0].residual);
        let recs = completeness_check(&p, &scheme, s, 3, 3, Tolerance::pinned(1e-2)).unwrap();
        assert!(recs[0].passed(), "{}", recs[0].residual);
        assert!(recs[1].residual < 1.0, "{:?}", recs[1].params.get("trend"));
    }

    #[test]
    fn coarse_schemes_are_reported_not_rejected() {
        let scheme = QuadratureScheme {
            q_rule: QRule { kind: Rule1d::GaussLegendre { half_width: 2.0 }, order: 8 },
            z_rule: PlanarRule::new(1.5, 6, 8),
        };
        let recs = completeness_check(&FresnelParams::identity(), &scheme, FockSpace::two(6).unwrap(), 2, 0, Tolerance::pinned(1e-2)).unwrap();
        assert!(!recs[0].passed());
    }

    #[test]
    fn moment_reduction_matches_direct_sum() {
        // Direct projector sum on a small scheme with the closed form built per node.
        let p = gaussian_unitaries::fresnel_params_from_ray(&gaussian_unitaries::RayMatrix::from_abc(1.2, 0.3, -0.2).unwrap()).unwrap();
        let scheme = QuadratureScheme {
            q_rule: QRule { kind: Rule1d::GaussLegendre { half_width: 3.0 }, order: 6 },
            z_rule: PlanarRule::new(1.2, 5, 7),
        };
        let k = 2;
        let fast = completeness_block(&p, &scheme, k).unwrap();
        // Components up to k are exact in any larger box.
        let s = FockSpace::two(16).unwrap();
        let idx = s.inner_indices(k);
        let grid = scheme.z_rule.grid().unwrap();
        let (qn, qw) = scheme.q_rule.nodes_weights().unwrap();
        let mut slow = DMatrix::<C64>::zeros(idx.len(), idx.len());
        for (q, wq) in qn.iter().zip(&qw) {
            for (z, wz) in grid.nodes.iter().zip(&grid.weights) {
                let st = ices(s, &IcesLabel::new(*z, *q, p).unwrap(), BuildMethod::ClosedForm).unwrap();
                let v = DMatrix::from_fn(idx.len(), 1, |r, _| st.amplitudes()[idx[r]]);
                slow += &v * v.adjoint() * C64::from(wq * wz);
            }
        }
        assert!((fast - slow).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-13);
    }
}

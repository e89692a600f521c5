use std::f64::consts::SQRT_2;

use fock_core::{basis_state, FockOperator, FockSpace, LadderExpr, Mode, ModeSpec};
use gaussian_unitaries::{fresnel_operator, fresnel_params_from_ray, FresnelParams, RayMatrix};
use ices_states::{ices, ices_conjugate, icms, imcs, BuildMethod, IcesLabel, KappaLabel};

use crate::util::{check_block, eigen_defect, inner_components, phase_free_distance, x_operator, y_operator};
use crate::{ResidualRecord, Tolerance, VerifyError, C64};

/// A state family together with its label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenTarget {
    Icms { q: f64, params: FresnelParams },
    Imcs { p: f64, params: FresnelParams },
    Ices { label: IcesLabel, method: BuildMethod },
    Kappa { label: KappaLabel, method: BuildMethod },
}

const INNER_BASIS: &str = "relative l2 over components with occupations <= k";

fn method_name(m: BuildMethod) -> &'static str {
    match m {
        BuildMethod::ClosedForm => "closed_form",
        BuildMethod::Protocol => "protocol",
    }
}

fn abcd_record(r: ResidualRecord, m: &RayMatrix) -> ResidualRecord {
    r.with("A", m.a()).with("B", m.b()).with("C", m.c()).with("D", m.d())
}

/// Residuals `‖(Op − λ)ψ‖/‖ψ‖` on the occupation `≤ k` block for each eigen
/// relation of the target: `DQ − BP` for the ICMS, `AP − CQ` for the IMCS, and
/// `a + b` together with `D(Q_b−Q_a) − B(P_b−P_a)` or `A(P_b−P_a) − C(Q_b−Q_a)`
/// for the two-mode states. The cutoff of `space` is used per mode.
pub fn eigen_residual(
    target: &EigenTarget,
    space: FockSpace,
    k: usize,
    tol: Tolerance,
) -> Result<Vec<ResidualRecord>, VerifyError> {
    check_block(space, k)?;
    let cutoff = space.cutoff();
    let sum = LadderExpr::lower(Mode::A) + LadderExpr::lower(Mode::B);
    Ok(match *target {
        EigenTarget::Icms { q, params } => {
            let st = icms(FockSpace::single(cutoff)?, Mode::A, q, &params)?;
            let m = params.ray();
            let op = LadderExpr::position(Mode::A) * m.d() - LadderExpr::momentum(Mode::A) * m.b();
            let r = eigen_defect(&op, C64::from(q), &st, k)?;
            vec![abcd_record(ResidualRecord::new("icms.eigen", r, INNER_BASIS, tol), &m)
                .with("q", q)
                .with("cutoff", cutoff)
                .with("k", k)]
        }
        EigenTarget::Imcs { p, params } => {
            let st = imcs(FockSpace::single(cutoff)?, Mode::A, p, &params)?;
            let m = params.ray();
            let op = LadderExpr::momentum(Mode::A) * m.a() - LadderExpr::position(Mode::A) * m.c();
            let r = eigen_defect(&op, C64::from(p), &st, k)?;
            vec![abcd_record(ResidualRecord::new("imcs.eigen", r, INNER_BASIS, tol), &m)
                .with("p", p)
                .with("cutoff", cutoff)
                .with("k", k)]
        }
        EigenTarget::Ices { label, method } => {
            let st = ices(FockSpace::two(cutoff)?, &label, method)?;
            let m = label.ray();
            let r_sum = eigen_defect(&sum, label.z * SQRT_2, &st, k)?;
            let r_x = eigen_defect(&x_operator(&m), C64::from(SQRT_2 * label.q), &st, k)?;
            [("ices.eigen.sum", r_sum), ("ices.eigen.x", r_x)]
                .into_iter()
                .map(|(c, r)| {
                    abcd_record(ResidualRecord::new(c, r, INNER_BASIS, tol), &m)
                        .with("z", label.z)
                        .with("q", label.q)
                        .with("method", method_name(method))
                        .with("cutoff", cutoff)
                        .with("k", k)
                })
                .collect()
        }
        EigenTarget::Kappa { label, method } => {
            let st = ices_conjugate(FockSpace::two(cutoff)?, &label, method)?;
            let m = label.ray();
            let r_sum = eigen_defect(&sum, label.z * SQRT_2, &st, k)?;
            let r_y = eigen_defect(&y_operator(&m), C64::from(SQRT_2 * label.p), &st, k)?;
            [("kappa.eigen.sum", r_sum), ("kappa.eigen.y", r_y)]
                .into_iter()
                .map(|(c, r)| {
                    abcd_record(ResidualRecord::new(c, r, INNER_BASIS, tol), &m)
                        .with("z", label.z)
                        .with("p", label.p)
                        .with("method", method_name(method))
                        .with("cutoff", cutoff)
                        .with("k", k)
                })
                .collect()
        }
    })
}

/// `F|q⟩` against the closed-form ICMS on components `≤ cutoff`, up to one
/// global phase. The position ket is not normalizable, so `F` is taken as the
/// exact compression at a padded cutoff that is doubled until the retained
/// components stop changing.
pub fn fresnel_ket_check(params: &FresnelParams, q: f64, cutoff: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    const SETTLED: f64 = 1e-12;
    const MAX_PAD: usize = 1024;
    let head = |pad: usize| -> Result<Vec<C64>, VerifyError> {
        let space = FockSpace::single(pad)?;
        let f: FockOperator = fresnel_operator(space, Mode::A, params)?;
        let ket = basis_state(space, &[ModeSpec::Position(q)])?;
        let head = f.matrix().rows(0, cutoff + 1) * ket.amplitudes();
        Ok(head.iter().copied().collect())
    };
    let mut pad = (8 * cutoff).max(128);
    let mut prev = head(pad)?;
    loop {
        let next = head(2 * pad)?;
        let change = phase_free_distance(&prev, &next);
        pad *= 2;
        prev = next;
        if change <= SETTLED || pad >= MAX_PAD {
            break;
        }
    }
    let closed = icms(FockSpace::single(cutoff)?, Mode::A, q, params)?;
    let r = phase_free_distance(&prev, closed.amplitudes().as_slice());
    Ok(abcd_record(
        ResidualRecord::new("icms.fresnel_image", r, "relative l2 over all retained components, phase aligned", tol),
        &params.ray(),
    )
    .with("q", q)
    .with("cutoff", cutoff)
    .with("padded_cutoff", pad))
}

/// Closed form against the beam-splitter protocol on the occupation `≤ k`
/// block, up to one global phase.
pub fn method_equivalence_check(label: &IcesLabel, space: FockSpace, k: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    check_block(space, k)?;
    let a = ices(space, label, BuildMethod::ClosedForm)?;
    let b = ices(space, label, BuildMethod::Protocol)?;
    let r = phase_free_distance(&inner_components(&b, k), &inner_components(&a, k));
    Ok(abcd_record(ResidualRecord::new("ices.method_agreement", r, INNER_BASIS, tol), &label.ray())
        .with("z", label.z)
        .with("q", label.q)
        .with("cutoff", space.cutoff())
        .with("k", k))
}

/// The two special ray matrices: the identity turns the ICMS into the position
/// ket and the IMCS into the momentum ket; the Fourier matrix `A = D = 0`,
/// `−B = C = 1` turns the ICMS into the momentum ket `|p = q⟩` and the IMCS into
/// the position ket `|x = −p⟩`, and the ICES into the `P_b − P_a` eigenstate.
pub fn degenerate_reduction_check(cutoff: usize, value: f64, tol: Tolerance) -> Result<Vec<ResidualRecord>, VerifyError> {
    let one = FockSpace::single(cutoff)?;
    let ident = FresnelParams::identity();
    let fourier = fresnel_params_from_ray(&RayMatrix::fourier())?;
    let ket = |spec: ModeSpec| basis_state(one, &[spec]);
    let basis = "relative l2 over all retained components, phase aligned";
    let cases = [
        ("icms.limit.identity", icms(one, Mode::A, value, &ident)?, ket(ModeSpec::Position(value))?),
        ("icms.limit.fourier", icms(one, Mode::A, value, &fourier)?, ket(ModeSpec::Momentum(value))?),
        ("imcs.limit.identity", imcs(one, Mode::A, value, &ident)?, ket(ModeSpec::Momentum(value))?),
        ("imcs.limit.fourier", imcs(one, Mode::A, value, &fourier)?, ket(ModeSpec::Position(-value))?),
    ];
    let mut out: Vec<ResidualRecord> = cases
        .into_iter()
        .map(|(claim, st, reference)| {
            let r = phase_free_distance(st.amplitudes().as_slice(), reference.amplitudes().as_slice());
            ResidualRecord::new(claim, r, basis, tol).with("value", value).with("cutoff", cutoff)
        })
        .collect();
    let two = FockSpace::two(cutoff)?;
    let k = cutoff / 2;
    let z = C64::new(0.3, -0.2);
    let dq = LadderExpr::position(Mode::B) - LadderExpr::position(Mode::A);
    let dp = LadderExpr::momentum(Mode::B) - LadderExpr::momentum(Mode::A);
    for (claim, params, op) in [("ices.limit.identity", ident, dq), ("ices.limit.fourier", fourier, dp)] {
        let st = ices(two, &IcesLabel::new(z, value, params)?, BuildMethod::ClosedForm)?;
        let r = eigen_defect(&op, C64::from(SQRT_2 * value), &st, k)?;
        out.push(ResidualRecord::new(claim, r, INNER_BASIS, tol).with("value", value).with("z", z).with("k", k));
    }
    Ok(out)
}

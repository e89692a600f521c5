use fock_core::{inner_block_distance, FockOperator, FockSpace};
use gaussian_unitaries::RayMatrix;

use crate::util::{check_block, x_operator, y_operator};
use crate::{ResidualRecord, Tolerance, VerifyError, C64};

/// Spectral norm of `[A(P_b−P_a) − C(Q_b−Q_a), D(Q_b−Q_a) − B(P_b−P_a)] + 2i`
/// on the occupation `≤ k` block. The commutator equals `−2i(AD − BC)`, so the
/// residual is `2|AD − BC − 1|` up to rounding; pass a non-unimodular `m`
/// (built with [`RayMatrix::unchecked`]) for a negative control.
pub fn conjugate_commutator_check(m: &RayMatrix, space: FockSpace, k: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    if space.modes() != 2 {
        return Err(VerifyError::InvalidInput("the commutator check needs two modes".into()));
    }
    check_block(space, k)?;
    let x = x_operator(m).to_operator(space)?;
    let y = y_operator(m).to_operator(space)?;
    let c = y.commutator(&x)?;
    let target = FockOperator::identity(space).scale(C64::new(0.0, -2.0));
    let r = inner_block_distance(&c, &target, k)?;
    Ok(ResidualRecord::new("kappa.conjugate_commutator", r, "spectral norm on the occupation <= k block", tol)
        .with("A", m.a())
        .with("B", m.b())
        .with("C", m.c())
        .with("D", m.d())
        .with("AD-BC", m.a() * m.d() - m.b() * m.c())
        .with("cutoff", space.cutoff())
        .with("k", k))
}

/// Runs [`conjugate_commutator_check`] on the non-unimodular `A = 2, D = 1`,
/// `B = C = 0`, where the commutator is `−4i`. The residual is the distance of
/// the measured defect from the predicted value 2, so the record passes exactly
/// when the check detects the broken identity by the predicted amount.
pub fn commutator_negative_control(space: FockSpace, k: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    let bad = RayMatrix::unchecked(2.0, 0.0, 0.0, 1.0)?;
    let inner = conjugate_commutator_check(&bad, space, k, Tolerance::pinned(0.0))?;
    let mut r = ResidualRecord::new(
        "kappa.conjugate_commutator.negative_control",
        (inner.residual - 2.0).abs(),
        "distance of the measured defect from the predicted 2|AD - BC - 1|",
        tol,
    );
    r.params = inner.params;
    Ok(r.with("measured_defect", inner.residual).with("predicted_defect", 2.0))
}

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use fock_core::{single_mode_amplitudes, FockSpace, FockState, Mode, ModeSpec};
use gaussian_unitaries::{beamsplitter, FresnelParams};
use nalgebra::DVector;

use crate::series::raising_exponential;
use crate::{BuildMethod, IcesLabel, KappaLabel, StatesError, C64};

const DEGENERACY: f64 = 1e-12;

/// Coefficients `(scalar, linear, quadratic)` of a one-mode Gaussian `scalar·exp(ℓx† + κx†²)|0⟩`.
struct OneModeGaussian {
    scalar: C64,
    linear: C64,
    quadratic: C64,
}

/// `π^{-1/4}(D+iB)^{-1/2} exp[−(A−iC)q²/2(D+iB) + √2 q x†/(D+iB) − (D−iB)x†²/2(D+iB)]`.
fn icms_coefficients(q: f64, params: &FresnelParams) -> Result<OneModeGaussian, StatesError> {
    let m = params.ray();
    let den = C64::new(m.d(), m.b());
    if den.norm() < DEGENERACY {
        return Err(StatesError::Degenerate("D + iB = 0: the state is a momentum-type limit, use the IMCS"));
    }
    let a_ic = C64::new(m.a(), -m.c());
    Ok(OneModeGaussian {
        scalar: PI.powf(-0.25) / den.sqrt() * (-a_ic * q * q / (2.0 * den)).exp(),
        linear: SQRT_2 * q / den,
        quadratic: -den.conj() / (2.0 * den),
    })
}

/// `π^{-1/4}(A−iC)^{-1/2} exp[−(D+iB)p²/2(A−iC) + √2 i p x†/(A−iC) + (A+iC)x†²/2(A−iC)]`.
fn imcs_coefficients(p: f64, params: &FresnelParams) -> Result<OneModeGaussian, StatesError> {
    let m = params.ray();
    let den = C64::new(m.a(), -m.c());
    if den.norm() < DEGENERACY {
        return Err(StatesError::Degenerate("A - iC = 0: the state is a coordinate-type limit, use the ICMS"));
    }
    let d_ib = C64::new(m.d(), m.b());
    Ok(OneModeGaussian {
        scalar: PI.powf(-0.25) / den.sqrt() * (-d_ib * p * p / (2.0 * den)).exp(),
        linear: C64::new(0.0, SQRT_2 * p) / den,
        quadratic: den.conj() / (2.0 * den),
    })
}

fn one_mode_state(space: FockSpace, mode: Mode, g: OneModeGaussian) -> Result<FockState, StatesError> {
    space.check_mode(mode)?;
    let z = C64::new(0.0, 0.0);
    let (linear, quadratic) = match mode {
        Mode::A => ([g.linear, z], [g.quadratic, z, z]),
        Mode::B => ([z, g.linear], [z, z, g.quadratic]),
    };
    raising_exponential(space, linear, quadratic, g.scalar)
}

/// ICMS `|q⟩_{s,r}` on `mode`; on a two-mode space the other mode is in vacuum.
pub fn icms(space: FockSpace, mode: Mode, q: f64, params: &FresnelParams) -> Result<FockState, StatesError> {
    if !q.is_finite() {
        return Err(StatesError::NonFinite("q"));
    }
    one_mode_state(space, mode, icms_coefficients(q, params)?)
}

/// IMCS `|p⟩_{s,r}` on `mode`.
pub fn imcs(space: FockSpace, mode: Mode, p: f64, params: &FresnelParams) -> Result<FockState, StatesError> {
    if !p.is_finite() {
        return Err(StatesError::NonFinite("p"));
    }
    one_mode_state(space, mode, imcs_coefficients(p, params)?)
}

/// Closed form shared by `|ζ⟩` and `|κ⟩`:
/// `e^{−|z|²/2} · g.scalar · exp[z(a†+b†)/√2 + ℓ(b†−a†)/√2 + κ(b†−a†)²/2]|00⟩`,
/// where `ℓ, κ` are the one-mode coefficients of the mode-`b` input.
fn entangled_closed_form(space: FockSpace, z: C64, g: OneModeGaussian) -> Result<FockState, StatesError> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let lin_d = g.linear * r;
    let quad_d = g.quadratic * 0.5;
    let linear = [z * r - lin_d, z * r + lin_d];
    // (b† − a†)² = a†² − 2a†b† + b†²
    let quadratic = [quad_d, -2.0 * quad_d, quad_d];
    let scalar = g.scalar * (-0.5 * z.norm_sqr()).exp();
    raising_exponential(space, linear, quadratic, scalar)
}

fn protocol(space: FockSpace, z: C64, input_b: FockState) -> Result<FockState, StatesError> {
    let coh = single_mode_amplitudes(space.cutoff(), ModeSpec::Coherent(z))?;
    let a = FockState::new(FockSpace::single(space.cutoff())?, DVector::from_vec(coh))?;
    let product = FockState::tensor(&a, &input_b)?;
    Ok(beamsplitter(space, FRAC_PI_4)?.apply(&product)?)
}

fn check_two_modes(space: FockSpace, z: C64) -> Result<(), StatesError> {
    if space.modes() != 2 {
        return Err(StatesError::NeedsTwoModes);
    }
    // Both methods honour the coherent leakage guard.
    single_mode_amplitudes(space.cutoff(), ModeSpec::Coherent(z))?;
    Ok(())
}

/// ICES `|z, q⟩_{s,r}`.
pub fn ices(space: FockSpace, label: &IcesLabel, method: BuildMethod) -> Result<FockState, StatesError> {
    check_two_modes(space, label.z)?;
    let g = icms_coefficients(label.q, &label.params)?;
    match method {
        BuildMethod::ClosedForm => entangled_closed_form(space, label.z, g),
        BuildMethod::Protocol => {
            let b = one_mode_state(FockSpace::single(space.cutoff())?, Mode::A, g)?;
            protocol(space, label.z, b)
        }
    }
}

/// Conjugate state `|κ⟩`.
pub fn ices_conjugate(space: FockSpace, label: &KappaLabel, method: BuildMethod) -> Result<FockState, StatesError> {
    check_two_modes(space, label.z)?;
    let g = imcs_coefficients(label.p, &label.params)?;
    match method {
        BuildMethod::ClosedForm => entangled_closed_form(space, label.z, g),
        BuildMethod::Protocol => {
            let b = one_mode_state(FockSpace::single(space.cutoff())?, Mode::A, g)?;
            protocol(space, label.z, b)
        }
    }
}

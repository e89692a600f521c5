use fock_core::{single_mode_amplitudes, ModeSpec};
use gaussian_unitaries::{fresnel_params_from_ray, EulerFresnel, RayMatrix};
use ices_numerics::{fresnel_integral_1d, hermite_functions, FresnelKernel};
use nalgebra::DMatrix;

use crate::{phase_free_distance, ResidualRecord, Tolerance, VerifyError, C64};

/// Sampling grids of the classical path and the Fock cutoff of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalGrid {
    pub input_half_width: f64,
    pub input_samples: usize,
    pub output_half_width: f64,
    pub output_samples: usize,
    pub cutoff: usize,
}

impl Default for ClassicalGrid {
    fn default() -> Self {
        Self { input_half_width: 12.0, input_samples: 4097, output_half_width: 8.0, output_samples: 321, cutoff: 40 }
    }
}

fn uniform(half_width: f64, samples: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (samples - 1) as f64;
    (0..samples).map(|i| -half_width + h * i as f64).collect()
}

/// `Σ_n c_n ψ_n(x)`.
fn wavefunction(amplitudes: &[C64], x: f64) -> C64 {
    let psi = hermite_functions(amplitudes.len() - 1, x);
    amplitudes.iter().zip(&psi).map(|(c, p)| c * p).sum()
}

fn input_label(spec: ModeSpec) -> String {
    match spec {
        ModeSpec::Vacuum => "ground".into(),
        ModeSpec::Coherent(z) => format!("coherent({}, {})", z.re, z.im),
        ModeSpec::Number(n) => format!("number({n})"),
        ModeSpec::Position(q) => format!("position({q})"),
        ModeSpec::Momentum(p) => format!("momentum({p})"),
    }
}

/// Output wavefunction of the diffraction integral with kernel
/// `exp[i(Ax² − 2xx′ + Dx′²)/2B]/√(2πiB)` applied to the sampled input, against
/// the number-basis route `⟨x′|F|ψ⟩ = Σ_n ψ_n(x′)(Fψ)_n`. The residual is the
/// relative L2 distance on the output grid after removing one global phase.
pub fn classical_fresnel_check(m: &RayMatrix, input: ModeSpec, grid: &ClassicalGrid, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    if grid.input_samples < 2 || grid.output_samples < 2 {
        return Err(VerifyError::InvalidInput("grids need at least two samples".into()));
    }
    let amps = single_mode_amplitudes(grid.cutoff, input)?;
    let x = uniform(grid.input_half_width, grid.input_samples);
    let x_out = uniform(grid.output_half_width, grid.output_samples);

    let sampled: Vec<C64> = x.iter().map(|&xi| wavefunction(&amps, xi)).collect();
    let classical = fresnel_integral_1d(&sampled, &x, FresnelKernel::new(m.a(), m.b(), m.d()), &x_out)?;

    let params = fresnel_params_from_ray(m)?;
    let column = DMatrix::from_column_slice(amps.len(), 1, &amps);
    let transformed = EulerFresnel::new(&params).apply(&column);
    let out_amps: Vec<C64> = transformed.column(0).iter().copied().collect();
    let operator: Vec<C64> = x_out.iter().map(|&xo| wavefunction(&out_amps, xo)).collect();

    let residual = phase_free_distance(&classical, &operator);
    Ok(ResidualRecord::new("fresnel.classical_agreement", residual, "relative L2 on the output grid up to a global phase", tol)
        .with("A", m.a())
        .with("B", m.b())
        .with("C", m.c())
        .with("D", m.d())
        .with("input", input_label(input))
        .with("input_samples", grid.input_samples)
        .with("output_samples", grid.output_samples)
        .with("cutoff", grid.cutoff))
}

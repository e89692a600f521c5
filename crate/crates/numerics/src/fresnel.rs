use std::f64::consts::PI;

use crate::{NumericsError, C64};

/// Smallest `|B|` accepted by [`fresnel_integral_1d`].
pub const MIN_FRESNEL_B: f64 = 0.1;
/// Minimum number of input samples.
pub const MIN_FRESNEL_SAMPLES: usize = 2048;
const DECAY_RATIO: f64 = 1e-10;

/// The entries of an ABCD matrix that enter the Fresnel kernel
/// `(2πiB)^{-1/2} exp[i(Ax² − 2x′x + Dx′²)/(2B)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelKernel {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl FresnelKernel {
    pub fn new(a: f64, b: f64, d: f64) -> Self {
        Self { a, b, d }
    }

    /// `(2πiB)^{-1/2}` on the principal branch.
    pub fn prefactor(&self) -> C64 {
        C64::new(0.0, 2.0 * PI * self.b).sqrt().inv()
    }

    pub fn eval(&self, x_out: f64, x_in: f64) -> C64 {
        let phase = (self.a * x_in * x_in - 2.0 * x_out * x_in + self.d * x_out * x_out) / (2.0 * self.b);
        self.prefactor() * C64::from_polar(1.0, phase)
    }
}

/// Trapezoid discretization of `g(x′) = ∫ K(x′, x) f(x) dx` on a uniform input grid.
///
/// Guards: `|B| ≥ 0.1`, at least 2048 uniformly spaced samples, `|f|` at both ends below
/// `1e-10` of its peak, and a kernel chirp that advances less than π per step.
pub fn fresnel_integral_1d(
    f: &[C64],
    x: &[f64],
    kernel: FresnelKernel,
    x_out: &[f64],
) -> Result<Vec<C64>, NumericsError> {
    if !(kernel.a.is_finite() && kernel.b.is_finite() && kernel.d.is_finite()) {
        return Err(NumericsError::NonFinite("ABCD entries"));
    }
    if kernel.b.abs() < MIN_FRESNEL_B {
        return Err(NumericsError::OscillationGuard { b: kernel.b.abs(), min: MIN_FRESNEL_B });
    }
    if f.len() != x.len() {
        return Err(NumericsError::BadGrid(format!("{} samples for {} points", f.len(), x.len())));
    }
    if x.len() < MIN_FRESNEL_SAMPLES {
        return Err(NumericsError::BadGrid(format!("{} samples, need {MIN_FRESNEL_SAMPLES}", x.len())));
    }
    let h = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    if !(h > 0.0) || x.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(NumericsError::BadGrid("spacing not uniform and increasing".into()));
    }
    if f.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(NumericsError::NonFinite("sampled input"));
    }
    let peak = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let edge = f[0].norm().max(f[f.len() - 1].norm());
    if peak > 0.0 && edge > DECAY_RATIO * peak {
        return Err(NumericsError::InsufficientDecay { ratio: edge / peak });
    }
    let x_max = x[0].abs().max(x[x.len() - 1].abs());
    let xo_max = x_out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let step = h * (kernel.a.abs() * x_max + xo_max) / kernel.b.abs();
    if step >= PI {
        return Err(NumericsError::UnderResolved { step });
    }

    let pre = kernel.prefactor();
    let inv2b = 1.0 / (2.0 * kernel.b);
    // The input chirp exp(iAx²/2B) f(x) does not depend on x′.
    let chirped: Vec<C64> = x
        .iter()
        .zip(f)
        .enumerate()
        .map(|(i, (xi, fi))| {
            let w = if i == 0 || i == x.len() - 1 { 0.5 } else { 1.0 };
            fi * C64::from_polar(w * h, kernel.a * xi * xi * inv2b)
        })
        .collect();
    Ok(x_out
        .iter()
        .map(|&xo| {
            let acc: C64 = x
                .iter()
                .zip(&chirped)
                .map(|(xi, ci)| ci * C64::from_polar(1.0, -2.0 * xo * xi * inv2b))
                .sum();
            pre * C64::from_polar(1.0, kernel.d * xo * xo * inv2b) * acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(l: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| -l + 2.0 * l * i as f64 / (n - 1) as f64).collect()
    }

    fn ground(x: &[f64]) -> Vec<C64> {
        x.iter().map(|x| C64::from(PI.powf(-0.25) * (-0.5 * x * x).exp())).collect()
    }

    fn l2(a: &[C64], b: &[C64], h: f64) -> f64 {
        (a.iter().zip(b).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * h).sqrt()
    }

    #[test]
    fn fourier_self_duality_of_ground_state() {
        let x = grid(10.0, 2049);
        let f = ground(&x);
        let g = fresnel_integral_1d(&f, &x, FresnelKernel::new(0.0, -1.0, 0.0), &x).unwrap();
        // The Fourier kernel carries the constant phase (−2πi)^{-1/2}·√(2π) = e^{iπ/4}.
        let phase = g[1024] / f[1024];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        let aligned: Vec<C64> = g.iter().map(|v| v / phase).collect();
        assert!(l2(&aligned, &f, x[1] - x[0]) < 1e-10);
    }

    #[test]
    fn norm_preserved() {
        let x = grid(12.0, 4097);
        let f: Vec<C64> = x
            .iter()
            .map(|x| C64::from_polar(PI.powf(-0.25) * (-0.5 * (x - 0.7_f64).powi(2)).exp(), 0.3 * x))
            .collect();
        let k = FresnelKernel::new(0.8, 0.9, (1.0 + 0.9 * 0.4) / 0.8);
        let g = fresnel_integral_1d(&f, &x, k, &x).unwrap();
        let h = x[1] - x[0];
        let nf = (f.iter().map(|v| v.norm_sqr()).sum::<f64>() * h).sqrt();
        let ng = (g.iter().map(|v| v.norm_sqr()).sum::<f64>() * h).sqrt();
        assert!((nf - ng).abs() < 1e-6);
    }

    #[test]
    fn small_b_approaches_identity() {
        let x = grid(8.0, 4097);
        let f = ground(&x);
        let h = x[1] - x[0];
        let dist = |b: f64| {
            let g = fresnel_integral_1d(&f, &x, FresnelKernel::new(1.0, b, 1.0), &x).unwrap();
            l2(&g, &f, h)
        };
        let (d1, d2, d3) = (dist(0.4), dist(0.2), dist(0.1));
        assert!(d3 < d2 && d2 < d1, "{d1} {d2} {d3}");
    }

    #[test]
    fn guards() {
        let x = grid(10.0, 2049);
        let f = ground(&x);
        assert!(matches!(
            fresnel_integral_1d(&f, &x, FresnelKernel::new(1.0, 0.05, 1.0), &x),
            Err(NumericsError::OscillationGuard { .. })
        ));
        let wide: Vec<C64> = x.iter().map(|x| C64::from((-0.01 * x * x).exp())).collect();
        assert!(matches!(
            fresnel_integral_1d(&wide, &x, FresnelKernel::new(0.0, 1.0, 0.0), &x),
            Err(NumericsError::InsufficientDecay { .. })
        ));
        let short = grid(10.0, 100);
        assert!(matches!(
            fresnel_integral_1d(&ground(&short), &short, FresnelKernel::new(0.0, 1.0, 0.0), &short),
            Err(NumericsError::BadGrid(_))
        ));
    }
}

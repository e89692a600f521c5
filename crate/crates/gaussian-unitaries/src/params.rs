use crate::{GaussianError, C64};

/// Tolerance of the type invariants `AD − BC = 1` and `|s|² − |r|² = 1`.
pub const INVARIANT_TOLERANCE: f64 = 1e-12;
/// Tolerance accepted by the parameter maps.
pub const CONVERSION_TOLERANCE: f64 = 1e-9;

/// Classical ABCD ray-transfer matrix with `AD − BC = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayMatrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl RayMatrix {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GaussianError> {
        let m = Self::unchecked(a, b, c, d)?;
        let defect = m.unimodularity_defect();
        if defect.abs() > INVARIANT_TOLERANCE {
            return Err(GaussianError::NotUnimodular(defect));
        }
        Ok(m)
    }

    /// Finite entries without the determinant check (for negative controls).
    pub fn unchecked(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GaussianError> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(GaussianError::NonFinite("ray matrix"));
        }
        Ok(Self { a, b, c, d })
    }

    /// Solves `D = (1 + BC)/A`; `A` must be nonzero.
    pub fn from_abc(a: f64, b: f64, c: f64) -> Result<Self, GaussianError> {
        Self::new(a, b, c, (1.0 + b * c) / a)
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `A = D = 0, B = −1, C = 1`.
    pub fn fourier() -> Self {
        Self { a: 0.0, b: -1.0, c: 1.0, d: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    /// `AD − BC − 1`.
    pub fn unimodularity_defect(&self) -> f64 {
        self.a * self.d - self.b * self.c - 1.0
    }
}

/// Complex pair `(s, r)` with `|s|² − |r|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelParams {
    s: C64,
    r: C64,
}

impl FresnelParams {
    pub fn new(s: C64, r: C64) -> Result<Self, GaussianError> {
        let p = Self::unchecked(s, r)?;
        let defect = p.unitarity_defect();
        if defect.abs() > INVARIANT_TOLERANCE {
            return Err(GaussianError::NotUnitary(defect));
        }
        Ok(p)
    }

    fn unchecked(s: C64, r: C64) -> Result<Self, GaussianError> {
        if ![s.re, s.im, r.re, r.im].iter().all(|v| v.is_finite()) {
            return Err(GaussianError::NonFinite("Fresnel parameters"));
        }
        Ok(Self { s, r })
    }

    pub fn identity() -> Self {
        Self { s: C64::new(1.0, 0.0), r: C64::new(0.0, 0.0) }
    }

    pub fn s(&self) -> C64 {
        self.s
    }

    pub fn r(&self) -> C64 {
        self.r
    }

    /// Parameters of `F†`: `(s*, −r)`.
    pub fn adjoint(&self) -> Self {
        Self { s: self.s.conj(), r: -self.r }
    }

    /// `|s|² − |r|² − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.s.norm_sqr() - self.r.norm_sqr() - 1.0
    }

    pub fn ray(&self) -> RayMatrix {
        ray_entries(self)
    }
}

/// `s = ½[(A+D) − i(B−C)]`, `r = −½[(A−D) + i(B+C)]`.
pub fn fresnel_params_from_ray(m: &RayMatrix) -> Result<FresnelParams, GaussianError> {
    let defect = m.unimodularity_defect();
    if defect.abs() > CONVERSION_TOLERANCE {
        return Err(GaussianError::NotUnimodular(defect));
    }
    let s = C64::new(0.5 * (m.a + m.d), -0.5 * (m.b - m.c));
    let r = C64::new(-0.5 * (m.a - m.d), -0.5 * (m.b + m.c));
    let p = FresnelParams::unchecked(s, r)?;
    debug_assert!(p.unitarity_defect().abs() <= 2.0 * CONVERSION_TOLERANCE);
    Ok(p)
}

fn ray_entries(p: &FresnelParams) -> RayMatrix {
    RayMatrix {
        a: p.s.re - p.r.re,
        d: p.s.re + p.r.re,
        b: -p.s.im - p.r.im,
        c: p.s.im - p.r.im,
    }
}

/// Inverse map: `A = Re s − Re r`, `D = Re s + Re r`, `B = −Im s − Im r`, `C = Im s − Im r`.
pub fn ray_from_fresnel(p: &FresnelParams) -> Result<RayMatrix, GaussianError> {
    let defect = p.unitarity_defect();
    if defect.abs() > CONVERSION_TOLERANCE {
        return Err(GaussianError::NotUnitary(defect));
    }
    Ok(ray_entries(p))
}

/// Squeezing parameter `λ` with `μ = e^λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeStrength {
    lambda: f64,
    mu: f64,
}

impl SqueezeStrength {
    pub fn new(lambda: f64) -> Result<Self, GaussianError> {
        if !lambda.is_finite() {
            return Err(GaussianError::NonFinite("squeezing parameter"));
        }
        Ok(Self { lambda, mu: lambda.exp() })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn inverse(&self) -> Self {
        Self { lambda: -self.lambda, mu: (-self.lambda).exp() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn worked_examples() {
        let p = fresnel_params_from_ray(&RayMatrix::identity()).unwrap();
        assert!(close(p.s(), C64::new(1.0, 0.0)) && close(p.r(), C64::new(0.0, 0.0)));
        let p = fresnel_params_from_ray(&RayMatrix::fourier()).unwrap();
        assert!(close(p.s(), C64::i()) && close(p.r(), C64::new(0.0, 0.0)));
        let p = fresnel_params_from_ray(&RayMatrix::new(2.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(close(p.s(), C64::new(1.5, 0.0)) && close(p.r(), C64::new(-0.5, -1.0)));
        assert!(p.unitarity_defect().abs() < 1e-15);
        let m = ray_from_fresnel(&FresnelParams::new(C64::i(), C64::new(0.0, 0.0)).unwrap()).unwrap();
        assert_eq!(m, RayMatrix::fourier());
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(matches!(RayMatrix::new(1.0, 0.5, 0.0, 1.0 + 1e-6), Err(GaussianError::NotUnimodular(_))));
        let bad = RayMatrix::unchecked(1.0, 0.0, 0.0, 1.0 + 1e-8).unwrap();
        assert!(fresnel_params_from_ray(&bad).is_err());
        assert!(FresnelParams::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0)).is_err());
        assert!(SqueezeStrength::new(f64::NAN).is_err());
        let s = SqueezeStrength::new(0.3).unwrap();
        assert_eq!(s.mu(), 0.3f64.exp());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn round_trips(a in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0], b in -3.0f64..3.0, c in -3.0f64..3.0) {
            let m = RayMatrix::from_abc(a, b, c).unwrap();
            let p = fresnel_params_from_ray(&m).unwrap();
            prop_assert!(p.unitarity_defect().abs() <= 1e-12 * (1.0 + p.s().norm_sqr()));
            let back = ray_from_fresnel(&p).unwrap();
            for (x, y) in [(m.a(), back.a()), (m.b(), back.b()), (m.c(), back.c()), (m.d(), back.d())] {
                prop_assert!((x - y).abs() <= 1e-12);
            }
            let again = fresnel_params_from_ray(&back).unwrap();
            prop_assert!((again.s() - p.s()).norm() <= 1e-12 && (again.r() - p.r()).norm() <= 1e-12);
        }
    }
}

use std::fmt;

use crate::{NumericsError, C64};

/// Parameters of `∫ d²z/π exp(ζ|z|² + ξz + ηz* + f z² + g z*²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIntegralSpec {
    pub zeta: C64,
    pub xi: C64,
    pub eta: C64,
    pub f: C64,
    pub g: C64,
}

/// The first convergence condition that failed, with the sign pattern
/// `(ζ + s1 f + s2 g)` it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceFailure {
    /// `Re(ζ ± f ± g) ≥ 0`.
    Linear { signs: (i8, i8), value: f64 },
    /// `Re[(ζ² − 4fg)/(ζ ± f ± g)] ≥ 0`.
    Ratio { signs: (i8, i8), value: f64 },
}

impl fmt::Display for ConvergenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s > 0 { '+' } else { '-' };
        match *self {
            Self::Linear { signs, value } => write!(
                f,
                "Re(zeta {} f {} g) = {value:.6e} is not negative",
                sign(signs.0),
                sign(signs.1)
            ),
            Self::Ratio { signs, value } => write!(
                f,
                "Re[(zeta^2 - 4fg)/(zeta {} f {} g)] = {value:.6e} is not negative",
                sign(signs.0),
                sign(signs.1)
            ),
        }
    }
}

const SIGNS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

impl GaussianIntegralSpec {
    pub fn new(zeta: C64, xi: C64, eta: C64, f: C64, g: C64) -> Self {
        Self { zeta, xi, eta, f, g }
    }

    /// Checks the stated convergence conditions for all four sign choices.
    pub fn validate(&self) -> Result<(), ConvergenceFailure> {
        let det = self.determinant();
        for signs in SIGNS {
            let lin = self.zeta + f64::from(signs.0) * self.f + f64::from(signs.1) * self.g;
            if lin.re >= 0.0 {
                return Err(ConvergenceFailure::Linear { signs, value: lin.re });
            }
            let ratio = (det / lin).re;
            if ratio >= 0.0 {
                return Err(ConvergenceFailure::Ratio { signs, value: ratio });
            }
        }
        Ok(())
    }

    /// Negative definiteness of the real part of the quadratic form in
    /// `(Re z, Im z)`, which is what absolute convergence actually requires.
    pub fn is_absolutely_convergent(&self) -> bool {
        let s = self.f + self.g;
        let d = self.f - self.g;
        let z = self.zeta.re;
        z + s.re < 0.0 && z - s.re < 0.0 && z * z - s.re * s.re - d.im * d.im > 0.0
    }

    /// `ζ² − 4fg`.
    pub fn determinant(&self) -> C64 {
        self.zeta * self.zeta - 4.0 * self.f * self.g
    }

    /// The closed-form value without any convergence check.
    pub fn closed_form(&self) -> C64 {
        let det = self.determinant();
        let exponent = (-self.zeta * self.xi * self.eta + self.xi * self.xi * self.g + self.eta * self.eta * self.f) / det;
        exponent.exp() / det.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        [self.zeta, self.xi, self.eta, self.f, self.g]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Closed form `(ζ² − 4fg)^{-1/2} exp[(−ζξη + ξ²g + η²f)/(ζ² − 4fg)]`, principal branch.
pub fn gaussian_integral_2d(spec: &GaussianIntegralSpec) -> Result<C64, NumericsError> {
    if !spec.is_finite() {
        return Err(NumericsError::NonFinite("gaussian integral parameters"));
    }
    spec.validate().map_err(NumericsError::Divergent)?;
    Ok(spec.closed_form())
}

/// `∫ exp(−αx² + βx) dx = sqrt(π/α) exp(β²/(4α))`, principal branch.
pub fn gaussian_integral_1d(alpha: C64, beta: C64) -> Result<C64, NumericsError> {
    if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite())
    {
        return Err(NumericsError::NonFinite("gaussian_integral_1d"));
    }
    if alpha.re <= 0.0 {
        return Err(NumericsError::NonPositiveAlpha(alpha.re));
    }
    Ok((C64::from(std::f64::consts::PI) / alpha).sqrt() * (beta * beta / (4.0 * alpha)).exp())
}

/// `∫ d²z/π exp(ξ|z|² + ηz + γz*) = −(1/ξ) exp(−ηγ/ξ)` for `Re ξ < 0`.
pub fn coherent_gaussian_integral(xi: C64, eta: C64, gamma: C64) -> Result<C64, NumericsError> {
    let spec = GaussianIntegralSpec::new(xi, eta, gamma, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    spec.validate().map_err(NumericsError::Divergent)?;
    Ok(-(-eta * gamma / xi).exp() / xi)
}

use gaussian_unitaries::{FresnelParams, RayMatrix};

use crate::{StatesError, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMethod {
    /// Exact series of the closed-form exponential on `|00⟩`.
    ClosedForm,
    /// `B(π/4)` applied to `|z⟩_a ⊗ |·⟩_{b,s,r}`.
    Protocol,
}

fn finite(z: C64, x: f64) -> bool {
    z.re.is_finite() && z.im.is_finite() && x.is_finite()
}

/// Labels `(z, q; s, r)` of `|z, q⟩_{s,r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcesLabel {
    pub z: C64,
    pub q: f64,
    pub params: FresnelParams,
}

impl IcesLabel {
    pub fn new(z: C64, q: f64, params: FresnelParams) -> Result<Self, StatesError> {
        if !finite(z, q) {
            return Err(StatesError::NonFinite("ICES label"));
        }
        Ok(Self { z, q, params })
    }

    pub fn ray(&self) -> RayMatrix {
        self.params.ray()
    }
}

/// Labels `(z, p; s, r)` of `|κ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaLabel {
    pub z: C64,
    pub p: f64,
    pub params: FresnelParams,
}

impl KappaLabel {
    pub fn new(z: C64, p: f64, params: FresnelParams) -> Result<Self, StatesError> {
        if !finite(z, p) {
            return Err(StatesError::NonFinite("kappa label"));
        }
        Ok(Self { z, p, params })
    }

    pub fn ray(&self) -> RayMatrix {
        self.params.ray()
    }
}

//! Scalar and quadrature machinery: Hermite polynomials and functions, the
//! two-dimensional complex Gaussian integral with its convergence validator,
//! Gauss rules, a polar grid for `d²z/π`, and the classical 1-D Fresnel
//! (ABCD) integral.

mod error;
mod fresnel;
mod gaussian;
mod hermite;
mod quadrature;

pub use error::NumericsError;
pub use fresnel::{fresnel_integral_1d, FresnelKernel, MIN_FRESNEL_B, MIN_FRESNEL_SAMPLES};
pub use gaussian::{
    coherent_gaussian_integral, gaussian_integral_1d, gaussian_integral_2d, ConvergenceFailure,
    GaussianIntegralSpec,
};
pub use hermite::{hermite_function, hermite_functions, hermite_poly, hermite_polys};
pub use quadrature::{
    gauss_hermite_rule, gauss_legendre_rule, planar_grid, planar_grid_with, PlanarGrid, PlanarRule,
    QRule, QuadratureScheme, RadialRule, Rule1d,
};

pub use num_complex::Complex64 as C64;

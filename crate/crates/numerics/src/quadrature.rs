use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

use crate::{NumericsError, C64};

/// Golub–Welsch: nodes and first-component weights of a symmetric Jacobi matrix.
fn golub_welsch(off_diag: impl Fn(usize) -> f64, order: usize, mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = off_diag(k);
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Newton-polishes Golub–Welsch nodes and recomputes the weights from the
/// Christoffel sum `1/Σ_k p_k(x)²` of the orthonormal polynomials.
/// `orthonormal(n, x)` returns `p_0(x) ..= p_n(x)` and `p_n'(x)`.
fn polish(nodes: &mut [f64], weights: &mut [f64], orthonormal: impl Fn(usize, f64) -> (Vec<f64>, f64)) {
    let n = nodes.len();
    for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
        for _ in 0..3 {
            let (p, dp) = orthonormal(n, *x);
            if dp != 0.0 {
                *x -= p[n] / dp;
            }
        }
        let (p, _) = orthonormal(n, *x);
        *w = 1.0 / p[..n].iter().map(|v| v * v).sum::<f64>();
    }
}

/// Gauss–Hermite rule for `∫ f(x) e^{-x²} dx`.
pub fn gauss_hermite_rule(order: usize) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
    if order == 0 {
        return Err(NumericsError::InvalidSize("Gauss-Hermite order must be >= 1".into()));
    }
    let (mut x, mut w) = golub_welsch(|k| (k as f64 / 2.0).sqrt(), order, PI.sqrt());
    // Orthonormal Hermite polynomials scaled by e^{-x²/2}: the Christoffel sum then
    // yields w e^{x²}, which is undone below. Avoids overflow for large nodes.
    polish(&mut x, &mut w, |n, x| {
        let psi = crate::hermite::hermite_functions(n, x);
        let dpsi = (2.0 * n as f64).sqrt() * psi[n - 1] - x * psi[n];
        (psi, dpsi)
    });
    for (xi, wi) in x.iter().zip(w.iter_mut()) {
        *wi *= (-xi * xi).exp();
    }
    Ok((x, w))
}

/// Gauss–Legendre rule for `∫_{-1}^{1} f(x) dx`.
pub fn gauss_legendre_rule(order: usize) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
    if order == 0 {
        return Err(NumericsError::InvalidSize("Gauss-Legendre order must be >= 1".into()));
    }
    let off = |k: usize| {
        let k = k as f64;
        k / (4.0 * k * k - 1.0).sqrt()
    };
    let (mut x, mut w) = golub_welsch(off, order, 2.0);
    polish(&mut x, &mut w, |n, x| {
        let mut p = vec![0.0; n + 1];
        p[0] = 0.5f64.sqrt();
        if n >= 1 {
            p[1] = 1.5f64.sqrt() * x;
        }
        for k in 1..n {
            let k = k as f64;
            let a = ((2.0 * k + 1.0) * (2.0 * k + 3.0)).sqrt() / (k + 1.0);
            let b = k / (k + 1.0) * ((2.0 * k + 3.0) / (2.0 * k - 1.0)).sqrt();
            p[k as usize + 1] = a * x * p[k as usize] - b * p[k as usize - 1];
        }
        // d/dx of the orthonormal P_n via (1 - x²) P_n' = n (P_{n-1} - x P_n).
        let nf = n as f64;
        let ratio = ((2.0 * nf + 1.0) / (2.0 * nf - 1.0)).sqrt();
        let dp = nf * (ratio * p[n - 1] - x * p[n]) / (1.0 - x * x);
        (p, dp)
    });
    Ok((x, w))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule1d {
    GaussHermite,
    /// Gauss–Legendre on `[-half_width, half_width]`.
    GaussLegendre { half_width: f64 },
}

/// A rule for the real line integral `∫ dq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QRule {
    pub kind: Rule1d,
    pub order: usize,
}

impl QRule {
    /// Nodes and weights for a plain `∫ f(q) dq` (Gauss–Hermite weights carry `e^{q²}`).
    pub fn nodes_weights(&self) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
        match self.kind {
            Rule1d::GaussHermite => {
                let (x, w) = gauss_hermite_rule(self.order)?;
                let w = x.iter().zip(&w).map(|(x, w)| w * (x * x).exp()).collect();
                Ok((x, w))
            }
            Rule1d::GaussLegendre { half_width } => {
                if !(half_width > 0.0 && half_width.is_finite()) {
                    return Err(NumericsError::InvalidSize(format!("half width {half_width}")));
                }
                let (x, w) = gauss_legendre_rule(self.order)?;
                Ok((
                    x.iter().map(|x| x * half_width).collect(),
                    w.iter().map(|w| w * half_width).collect(),
                ))
            }
        }
    }

    /// Refinement step: doubles the order and widens a Legendre interval by one unit.
    pub fn refined(&self) -> Self {
        let kind = match self.kind {
            Rule1d::GaussLegendre { half_width } => Rule1d::GaussLegendre { half_width: half_width + 1.0 },
            k => k,
        };
        Self { kind, order: 2 * self.order }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialRule {
    Midpoint,
    GaussLegendre,
}

/// Polar product rule on the disc `|z| ≤ radius` for the measure `d²z/π`.
/// Angles are equally spaced midpoints; the radial rule is selectable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarRule {
    pub radius: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub radial: RadialRule,
}

impl PlanarRule {
    pub fn new(radius: f64, n_radial: usize, n_angular: usize) -> Self {
        Self { radius, n_radial, n_angular, radial: RadialRule::GaussLegendre }
    }

    pub fn grid(&self) -> Result<PlanarGrid, NumericsError> {
        planar_grid_with(self.radius, self.n_radial, self.n_angular, self.radial)
    }

    /// Refinement step: doubles the radial count and extends the radius by one.
    pub fn refined(&self) -> Self {
        Self { radius: self.radius + 1.0, n_radial: 2 * self.n_radial, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarGrid {
    pub nodes: Vec<C64>,
    /// Weights for `d²z/π` (the `1/π` is included).
    pub weights: Vec<f64>,
}

/// Polar grid with Gauss–Legendre radial nodes and midpoint angles.
pub fn planar_grid(radius: f64, n_radial: usize, n_angular: usize) -> Result<PlanarGrid, NumericsError> {
    planar_grid_with(radius, n_radial, n_angular, RadialRule::GaussLegendre)
}

pub fn planar_grid_with(
    radius: f64,
    n_radial: usize,
    n_angular: usize,
    radial: RadialRule,
) -> Result<PlanarGrid, NumericsError> {
    if n_radial == 0 || n_angular == 0 {
        return Err(NumericsError::InvalidSize(format!("planar grid {n_radial}x{n_angular}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(NumericsError::InvalidSize(format!("radius {radius}")));
    }
    let (r, wr): (Vec<f64>, Vec<f64>) = match radial {
        RadialRule::Midpoint => {
            let h = radius / n_radial as f64;
            (0..n_radial).map(|i| ((i as f64 + 0.5) * h, h)).unzip()
        }
        RadialRule::GaussLegendre => {
            let (x, w) = gauss_legendre_rule(n_radial)?;
            x.iter().zip(&w).map(|(x, w)| (0.5 * radius * (x + 1.0), 0.5 * radius * w)).unzip()
        }
    };
    let dtheta = 2.0 * PI / n_angular as f64;
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for (ri, wi) in r.iter().zip(&wr) {
        for j in 0..n_angular {
            nodes.push(C64::from_polar(*ri, (j as f64 + 0.5) * dtheta));
            weights.push(ri * wi * dtheta / PI);
        }
    }
    Ok(PlanarGrid { nodes, weights })
}

/// Discretization of `∫dq ∫d²z/π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme {
    pub q_rule: QRule,
    pub z_rule: PlanarRule,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self {
            q_rule: QRule { kind: Rule1d::GaussLegendre { half_width: 6.0 }, order: 64 },
            z_rule: PlanarRule::new(4.0, 48, 48),
        }
    }
}

impl QuadratureScheme {
    pub fn validate(&self) -> Result<(), NumericsError> {
        self.q_rule.nodes_weights()?;
        if self.z_rule.n_radial == 0 || self.z_rule.n_angular == 0 || !(self.z_rule.radius > 0.0) {
            return Err(NumericsError::InvalidSize("planar rule".into()));
        }
        Ok(())
    }

    pub fn refined(&self) -> Self {
        Self { q_rule: self.q_rule.refined(), z_rule: self.z_rule.refined() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn double_factorial_odd(k: usize) -> f64 {
        (1..=k).step_by(2).map(|x| x as f64).product()
    }

    #[test]
    fn order_two_hermite() {
        let (x, w) = gauss_hermite_rule(2).unwrap();
        let r = 0.5f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        for wi in w {
            assert!((wi - PI.sqrt() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hermite_moments_exact_to_degree() {
        for order in [1, 3, 8, 20] {
            let (x, w) = gauss_hermite_rule(order).unwrap();
            for deg in 0..2 * order {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let scale: f64 = x.iter().zip(&w).map(|(x, w)| (w * x.powi(deg as i32)).abs()).sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    PI.sqrt() * double_factorial_odd(deg.saturating_sub(1)) / 2f64.powi(deg as i32 / 2)
                };
                assert!((q - exact).abs() <= 1e-12 * scale.max(1.0), "order {order} deg {deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn legendre_moments() {
        let (x, w) = gauss_legendre_rule(10).unwrap();
        for deg in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn planar_grid_gaussian_moments() {
        let g = planar_grid(6.0, 80, 64).unwrap();
        let m0: f64 = g.nodes.iter().zip(&g.weights).map(|(z, w)| w * (-z.norm_sqr()).exp()).sum();
        let m1: f64 = g
            .nodes
            .iter()
            .zip(&g.weights)
            .map(|(z, w)| w * z.norm_sqr() * (-z.norm_sqr()).exp())
            .sum();
        assert!((m0 - 1.0).abs() < 1e-10, "{m0}");
        assert!((m1 - 1.0).abs() < 1e-8, "{m1}");
    }

    #[test]
    fn midpoint_radial_converges_quadratically() {
        let err = |n: usize| {
            let g = planar_grid_with(6.0, n, 16, RadialRule::Midpoint).unwrap();
            let m: f64 = g.nodes.iter().zip(&g.weights).map(|(z, w)| w * (-z.norm_sqr()).exp()).sum();
            (m - 1.0).abs()
        };
        let (e1, e2) = (err(40), err(80));
        assert!(e2 < e1 && (e1 / e2 - 4.0).abs() < 0.2, "{e1} {e2}");
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(gauss_hermite_rule(0).is_err());
        assert!(planar_grid(1.0, 0, 4).is_err());
        assert!(planar_grid(-1.0, 4, 4).is_err());
    }

    proptest! {
        #[test]
        fn angular_rule_kills_nonzero_winding(m in 1i32..8, n_ang in 17usize..40) {
            // ∫ z^m e^{-|z|²} d²z/π vanishes; midpoint angles are exact for |m| < n_ang.
            let g = planar_grid(5.0, 30, n_ang).unwrap();
            let s: C64 = g.nodes.iter().zip(&g.weights).map(|(z, w)| *w * z.powi(m) * (-z.norm_sqr()).exp()).sum();
            prop_assert!(s.norm() < 1e-12);
        }
    }
}

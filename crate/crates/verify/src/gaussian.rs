use ices_numerics::{coherent_gaussian_integral, gaussian_integral_1d, gaussian_integral_2d, GaussianIntegralSpec};
use rand::Rng;

use crate::{disk_point, ResidualRecord, Tolerance, VerifyError, C64};

/// Square `[−half_width, half_width]²` with step `h` for the planar trapezoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarTrapezoid {
    pub half_width: f64,
    pub step: f64,
}

impl PlanarTrapezoid {
    fn halved(self) -> Self {
        Self { step: 0.5 * self.step, ..self }
    }
}

/// `∫ d²z/π exp(ζ|z|² + ξz + ηz* + f z² + g z*²)` by the trapezoid rule on a square.
pub fn planar_trapezoid(spec: &GaussianIntegralSpec, rule: PlanarTrapezoid) -> C64 {
    let n = (2.0 * rule.half_width / rule.step).round() as usize;
    let h = 2.0 * rule.half_width / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..=n {
        let x = -rule.half_width + h * i as f64;
        let wx = if i == 0 || i == n { 0.5 } else { 1.0 };
        for j in 0..=n {
            let y = -rule.half_width + h * j as f64;
            let wy = if j == 0 || j == n { 0.5 } else { 1.0 };
            let z = C64::new(x, y);
            let zc = z.conj();
            let e = spec.zeta * z.norm_sqr() + spec.xi * z + spec.eta * zc + spec.f * z * z + spec.g * zc * zc;
            acc += e.exp() * (wx * wy);
        }
    }
    acc * (h * h / std::f64::consts::PI)
}

/// `∫ exp(−αx² + βx) dx` by the trapezoid rule on `[−half_width, half_width]`.
fn line_trapezoid(alpha: C64, beta: C64, half_width: f64, step: f64) -> C64 {
    let n = (2.0 * half_width / step).round() as usize;
    let h = 2.0 * half_width / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..=n {
        let x = -half_width + h * i as f64;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += (-alpha * x * x + beta * x).exp() * w;
    }
    acc * h
}

/// Specs well inside the convergence region: `Re ζ ∈ [−2, −0.8]`, `|Im ζ| ≤ 0.5`,
/// `|f|, |g| ≤ 0.3`, `|ξ|, |η| ≤ 1`. Draws the validator rejects are redrawn.
pub fn interior_specs(rng: &mut impl Rng, count: usize) -> Vec<GaussianIntegralSpec> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let zeta = C64::new(rng.gen_range(-2.0..=-0.8), rng.gen_range(-0.5..=0.5));
        let spec = GaussianIntegralSpec::new(zeta, disk_point(rng, 1.0), disk_point(rng, 1.0), disk_point(rng, 0.3), disk_point(rng, 0.3));
        if spec.validate().is_ok() && spec.is_absolutely_convergent() {
            out.push(spec);
        }
    }
    out
}

/// Default brute-force rule for [`interior_specs`]: the slowest decay rate is at
/// least 0.2, so the integrand is below `e^{−40}` of its peak at the edge.
pub const INTERIOR_RULE: PlanarTrapezoid = PlanarTrapezoid { half_width: 16.0, step: 0.1 };

fn relative(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Closed form of the two-dimensional Gaussian integral against the planar
/// trapezoid at `rule` and at half its step. The residual is the largest
/// relative difference to the finer sum; the largest change between the two
/// sums is recorded as `resolution_change`.
pub fn gaussian_formula_check(specs: &[GaussianIntegralSpec], rule: PlanarTrapezoid, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    if specs.is_empty() {
        return Err(VerifyError::InvalidInput("no Gaussian specs".into()));
    }
    let (mut worst, mut change) = (0.0f64, 0.0f64);
    for spec in specs {
        let closed = gaussian_integral_2d(spec)?;
        let coarse = planar_trapezoid(spec, rule);
        let fine = planar_trapezoid(spec, rule.halved());
        worst = worst.max(relative(closed, fine));
        change = change.max(relative(coarse, fine));
    }
    Ok(ResidualRecord::new("gaussian.two_dimensional", worst, "largest relative difference to the planar trapezoid", tol)
        .with("specs", specs.len())
        .with("half_width", rule.half_width)
        .with("step", rule.step)
        .with("resolution_change", change))
}

/// `∫ d²z/π exp(ξ|z|² + ηz + γz*) = −(1/ξ) exp(−ηγ/ξ)` against the planar
/// trapezoid for `count` random `(ξ, η, γ)` with `Re ξ ∈ [−2, −0.5]`.
pub fn coherent_kernel_check(rng: &mut impl Rng, count: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    let rule = PlanarTrapezoid { half_width: 14.0, step: 0.1 };
    let mut worst = 0.0f64;
    for _ in 0..count {
        let xi = C64::new(rng.gen_range(-2.0..=-0.5), rng.gen_range(-1.0..=1.0));
        let (eta, gamma) = (disk_point(rng, 1.0), disk_point(rng, 1.0));
        let closed = coherent_gaussian_integral(xi, eta, gamma)?;
        let spec = GaussianIntegralSpec::new(xi, eta, gamma, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        worst = worst.max(relative(closed, planar_trapezoid(&spec, rule)));
    }
    Ok(ResidualRecord::new("gaussian.coherent_kernel", worst, "largest relative difference to the planar trapezoid", tol).with("samples", count))
}

/// `∫ exp(−αx² + βx) dx = √(π/α) exp(β²/4α)` against the trapezoid rule for
/// `count` random `(α, β)` with `Re α ∈ [0.3, 2]`.
pub fn line_gaussian_check(rng: &mut impl Rng, count: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let alpha = C64::new(rng.gen_range(0.3..=2.0), rng.gen_range(-1.0..=1.0));
        let beta = disk_point(rng, 1.5);
        let closed = gaussian_integral_1d(alpha, beta)?;
        worst = worst.max(relative(closed, line_trapezoid(alpha, beta, 30.0, 0.05)));
    }
    Ok(ResidualRecord::new("gaussian.one_dimensional", worst, "largest relative difference to the trapezoid rule", tol).with("samples", count))
}

/// Hand-built specs at and around the edge of the convergence region.
pub fn boundary_specs() -> Vec<(&'static str, GaussianIntegralSpec)> {
    let c = C64::new;
    let lin = (c(0.2, 0.0), c(0.0, -0.1));
    let spec = |zeta: C64, f: C64, g: C64| GaussianIntegralSpec::new(zeta, lin.0, lin.1, f, g);
    // Without linear terms, so the slowly decaying cases stay centred on the squares.
    let bare = |zeta: C64| GaussianIntegralSpec::new(zeta, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    vec![
        ("f=g=0.49", spec(c(-1.0, 0.0), c(0.49, 0.0), c(0.49, 0.0))),
        ("f=g=0.5 (flat direction)", spec(c(-1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0))),
        ("f=g=0.51", spec(c(-1.0, 0.0), c(0.51, 0.0), c(0.51, 0.0))),
        ("zeta=-0.01", bare(c(-0.01, 0.0))),
        ("zeta=+0.01", bare(c(0.01, 0.0))),
        ("zeta=i (oscillatory)", bare(c(0.0, 1.0))),
        ("f=-g=0.4i", spec(c(-1.0, 0.0), c(0.0, 0.4), c(0.0, -0.4))),
        ("f=-g=0.6i", spec(c(-1.0, 0.0), c(0.0, 0.6), c(0.0, -0.6))),
    ]
}

/// Half-widths of the nested squares used to judge convergence numerically.
const PARTIAL_WIDTHS: [f64; 2] = [40.0, 80.0];
const PARTIAL_STEP: f64 = 0.2;
const PARTIAL_SETTLED: f64 = 1e-6;

/// Whether partial integrals over growing squares settle: the last two differ
/// by at most `1e−6` relative.
pub fn numerically_convergent(spec: &GaussianIntegralSpec) -> bool {
    let partial: Vec<C64> = PARTIAL_WIDTHS
        .iter()
        .map(|&w| planar_trapezoid(spec, PlanarTrapezoid { half_width: w, step: PARTIAL_STEP }))
        .collect();
    let (a, b) = (partial[0], partial[1]);
    a.re.is_finite() && b.re.is_finite() && a.im.is_finite() && b.im.is_finite() && relative(a, b) <= PARTIAL_SETTLED
}

/// Number of boundary cases where the validator's accept/reject decision
/// disagrees with numerical convergence of the partial integrals.
pub fn validator_boundary_check(tol: Tolerance) -> ResidualRecord {
    let mut mismatched = Vec::new();
    let cases = boundary_specs();
    for (name, spec) in &cases {
        if spec.validate().is_ok() != numerically_convergent(spec) {
            mismatched.push(*name);
        }
    }
    ResidualRecord::new("gaussian.validator_boundary", mismatched.len() as f64, "count of cases where the validator and the partial integrals disagree", tol)
        .with("cases", cases.len())
        .with("mismatched", mismatched.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn interior_specs_match_closed_form() {
        let specs = interior_specs(&mut seeded_rng(1), 6);
        let r = gaussian_formula_check(&specs, INTERIOR_RULE, Tolerance::pinned(1e-8)).unwrap();
        assert!(r.passed(), "{}", r.residual);
    }

    #[test]
    fn kernel_and_line_formulas() {
        let mut rng = seeded_rng(4);
        assert!(coherent_kernel_check(&mut rng, 4, Tolerance::pinned(1e-8)).unwrap().passed());
        assert!(line_gaussian_check(&mut rng, 10, Tolerance::pinned(1e-10)).unwrap().passed());
    }

    #[test]
    fn validator_agrees_with_partial_integrals() {
        let r = validator_boundary_check(Tolerance::pinned(0.5));
        assert!(r.passed(), "{:?}", r.params.get("mismatched"));
    }

    #[test]
    fn wrong_closed_form_is_detected() {
        let spec = interior_specs(&mut seeded_rng(9), 1)[0];
        let wrong = spec.closed_form() * 1.001;
        assert!(relative(wrong, planar_trapezoid(&spec, INTERIOR_RULE)) > 1e-4);
    }
}

use crate::C64;
use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(x)` for complex argument, by the
/// recurrence `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_poly(n: usize, x: C64) -> C64 {
    *hermite_polys(n, x).last().expect("non-empty")
}

/// `H_0(x) ..= H_n(x)`.
pub fn hermite_polys(n: usize, x: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(C64::new(1.0, 0.0));
    if n == 0 {
        return out;
    }
    out.push(2.0 * x);
    for k in 1..n {
        let next = 2.0 * x * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// Normalized Hermite functions `psi_k(x) = pi^{-1/4} (2^k k!)^{-1/2} H_k(x) e^{-x²/2}`
/// for `k = 0..=n`, via the normalized three-term recurrence (no overflow at large `k`).
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * out[0]);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Single normalized Hermite function `psi_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

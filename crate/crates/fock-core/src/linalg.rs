//! Dense complex kernels: a fast matrix product and a Padé matrix exponential.

use nalgebra::DMatrix;

use crate::C64;

const SPLIT_THRESHOLD: usize = 48;

fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|c| c.re), m.map(|c| c.im))
}

/// Complex matrix product. Large products are split into four real GEMMs,
/// which run far faster than the generic complex kernel.
pub fn cmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "cmul shape mismatch");
    if a.nrows().min(a.ncols()).min(b.ncols()) < SPLIT_THRESHOLD {
        return a * b;
    }
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
}

/// Largest absolute column sum.
pub fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Scaling-and-squaring with the degree-13 Padé approximant.
pub fn matrix_exp_dense(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix_exp needs a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a / C64::from(2f64.powi(s));
    let b = &PADE13;
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = cmul(&a, &a);
    let a4 = cmul(&a2, &a2);
    let a6 = cmul(&a2, &a4);
    let c = |x: f64| C64::from(x);
    let u_inner = &a6 * c(b[13]) + &a4 * c(b[11]) + &a2 * c(b[9]);
    let u = cmul(&a6, &u_inner) + &a6 * c(b[7]) + &a4 * c(b[5]) + &a2 * c(b[3]) + &ident * c(b[1]);
    let u = cmul(&a, &u);
    let v_inner = &a6 * c(b[12]) + &a4 * c(b[10]) + &a2 * c(b[8]);
    let v = cmul(&a6, &v_inner) + &a6 * c(b[6]) + &a4 * c(b[4]) + &a2 * c(b[2]) + &ident * c(b[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Pade denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = cmul(&r, &r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> DMatrix<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn split_product_matches_generic() {
        let a = random(70, 1);
        let b = random(70, 2);
        let d = cmul(&a, &b) - &a * &b;
        assert!(d.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn exp_of_diagonal_and_nilpotent() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.5, 1.0),
            C64::new(-3.0, 0.0),
            C64::new(10.0, -2.0),
        ]));
        let e = matrix_exp_dense(&d);
        for i in 0..3 {
            let expect = d[(i, i)].exp();
            assert!((e[(i, i)] - expect).norm() <= 1e-13 * expect.norm());
        }
        // exp of a nilpotent Jordan block is a finite Taylor sum.
        let mut j = DMatrix::<C64>::zeros(4, 4);
        for i in 0..3 {
            j[(i, i + 1)] = C64::new(2.0, 0.0);
        }
        let e = matrix_exp_dense(&j);
        let expect = [1.0, 2.0, 2.0, 4.0 / 3.0];
        for (k, v) in expect.iter().enumerate() {
            assert!((e[(0, k)] - v).norm() < 1e-13);
        }
    }

    #[test]
    fn large_norm_anti_hermitian_stays_unitary() {
        let a = random(60, 3);
        let h = (&a - a.adjoint()) * C64::from(20.0);
        let u = matrix_exp_dense(&h);
        let d = cmul(&u, &u.adjoint()) - DMatrix::identity(60, 60);
        assert!(d.iter().all(|v| v.norm() < 1e-11));
    }

    #[test]
    fn accurate_against_eigendecomposition_at_norm_fifty() {
        // Real symmetric H so that the oracle's eigensolver is fully accurate.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = DMatrix::<f64>::from_fn(40, 40, |_, _| rng.gen_range(-1.0..1.0));
        let h = (&r + r.transpose()) * 0.5;
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        let scale = 50.0 / eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let v = eig.eigenvectors.map(C64::from);
        for (shift, phase) in [(0.0, C64::i()), (-50.0, C64::from(1.0))] {
            // Unitary exp(iH) and a Hermitian exp(H - 50) with spectrum in [e^-100, 1].
            let gen = h.map(|x| phase * x * scale) + DMatrix::identity(40, 40) * C64::from(shift);
            let diag = eig.eigenvalues.map(|l| (phase * l * scale + shift).exp());
            let exact = &v * DMatrix::from_diagonal(&diag) * v.adjoint();
            let got = matrix_exp_dense(&gen);
            let rel = (got - &exact).norm() / exact.norm();
            assert!(rel < 1e-12, "relative error {rel}");
        }
    }
}

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use fock_core::{expm_action, FockOperator, FockSpace, LadderExpr, Mode};
use gaussian_unitaries::{
    beamsplitter, beamsplitter_sector, padded_exp_apply, squeezer, FresnelParams, SqueezeStrength,
};
use nalgebra::DMatrix;

use crate::util::{check_block, spectral_norm};
use crate::{ResidualRecord, Tolerance, VerifyError, C64};

const THETA: f64 = FRAC_PI_4;

/// The generator exponential runs in a two-mode box grown by this many quanta
/// per mode until the inner block changes by at most [`BOX_CONVERGENCE`].
const BOX_STEP: usize = 12;
const BOX_CONVERGENCE: f64 = 1e-13;
const MAX_BOX_CUTOFF: usize = 200;

/// Columns `0..=jmax` of the one-mode `W = F S(λ) F†`, with as many rows as the
/// padding needed to hold them. `W = exp (λ/2)[(F a F†)² − (F a† F†)²]` with
/// `F a F† = s* a + r a†`, so a single padded exponential suffices.
fn w_columns(params: &FresnelParams, lambda: f64, jmax: usize) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(jmax + 1, jmax + 1);
    if lambda == 0.0 {
        return id;
    }
    let (s, r) = (params.s(), params.r());
    let lower = LadderExpr::lower(Mode::A) * s.conj() + LadderExpr::raise(Mode::A) * r;
    let raise = lower.adjoint();
    let gen = ((lower.clone() * lower) - (raise.clone() * raise)) * (0.5 * lambda);
    let w = padded_exp_apply(&gen.simplified(), &id);
    if w.nrows() > jmax {
        w
    } else {
        w.resize_vertically(jmax + 1, C64::new(0.0, 0.0))
    }
}

/// `U = B(π/4) F S(λ) F† B(π/4)†` with `F`, `S` on mode `b`, at the cutoff of
/// `space`.
///
/// `B` preserves the total number `T` and `W = F S F†` acts on `b` alone, so
/// `⟨m|U|l⟩ = Σ_k B^{T_m}[m_a, k] W[T_m − k, T_l − k] B^{T_l}[l_a, k]` with
/// `B^T` the exact sector matrices. Every retained element is exact.
pub fn squeeze_operator(space: FockSpace, params: &FresnelParams, strength: SqueezeStrength) -> Result<FockOperator, VerifyError> {
    if space.modes() != 2 {
        return Err(VerifyError::InvalidInput("the squeezing operator needs two modes".into()));
    }
    let n = space.cutoff();
    let w = w_columns(params, strength.lambda(), 2 * n);
    let sectors: Vec<DMatrix<f64>> = (0..=2 * n).map(|t| beamsplitter_sector(t, THETA)).collect();
    let mut u = DMatrix::<C64>::zeros(space.dim(), space.dim());
    for l in 0..space.dim() {
        let [la, lb] = space.occupations(l);
        let tl = la + lb;
        for m in 0..space.dim() {
            let [ma, mb] = space.occupations(m);
            let tm = ma + mb;
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..=tm.min(tl) {
                acc += w[(tm - k, tl - k)] * (sectors[tm][(ma, k)] * sectors[tl][(la, k)]);
            }
            u[(m, l)] = acc;
        }
    }
    Ok(FockOperator::new(space, u)?)
}

/// `G = (λ/2)[½(s*² − r*²)(a − b)² + s*r(1 + b†b + a†a − a†b − ab†)] − h.c.`
pub fn squeeze_generator(params: &FresnelParams, strength: SqueezeStrength) -> LadderExpr {
    let (s, r) = (params.s(), params.r());
    let a = LadderExpr::lower(Mode::A);
    let b = LadderExpr::lower(Mode::B);
    let ad = LadderExpr::raise(Mode::A);
    let bd = LadderExpr::raise(Mode::B);
    let diff = a.clone() - b.clone();
    let quad = (diff.clone() * diff) * (0.5 * (s.conj() * s.conj() - r.conj() * r.conj()));
    let mix = (LadderExpr::scalar(C64::new(1.0, 0.0)) + bd.clone() * b.clone() + ad.clone() * a.clone()
        - ad * b
        - a * bd)
        * (s.conj() * r);
    let half = (quad + mix) * (0.5 * strength.lambda());
    (half.clone() - half.adjoint()).simplified()
}

/// Columns of `W B†` applied to the inner basis states `|l_a, l_b⟩` (every
/// occupation `≤ k`), flattened over `(n_a, n_b)` as `n_a · rows + n_b` with
/// `n_a ≤ 2k + 1` and `n_b < rows`. One spare slot in each mode keeps raising
/// exact.
struct SectorVectors {
    rows: usize,
    na_dim: usize,
    data: DMatrix<C64>,
}

impl SectorVectors {
    fn build(w: &DMatrix<C64>, k: usize) -> Self {
        let rows = w.nrows() + 1;
        let na_dim = 2 * k + 2;
        let mut data = DMatrix::zeros(na_dim * rows, (k + 1) * (k + 1));
        for la in 0..=k {
            for lb in 0..=k {
                let col = la * (k + 1) + lb;
                let t = la + lb;
                let sector = beamsplitter_sector(t, THETA);
                for ka in 0..=t {
                    let coeff = sector[(la, ka)];
                    for j in 0..w.nrows() {
                        data[(ka * rows + j, col)] = w[(j, t - ka)] * coeff;
                    }
                }
            }
        }
        Self { rows, na_dim, data }
    }

    /// `(α a + β a† + γ b + δ b†)` applied to every column.
    fn apply(&self, op: &Linear) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.data.nrows(), self.data.ncols());
        let r = self.rows;
        for c in 0..self.data.ncols() {
            for na in 0..self.na_dim {
                for nb in 0..r {
                    let v = self.data[(na * r + nb, c)];
                    if v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    if na > 0 {
                        out[((na - 1) * r + nb, c)] += op.a * v * (na as f64).sqrt();
                    }
                    if na + 1 < self.na_dim {
                        out[((na + 1) * r + nb, c)] += op.ad * v * ((na + 1) as f64).sqrt();
                    }
                    if nb > 0 {
                        out[(na * r + nb - 1, c)] += op.b * v * (nb as f64).sqrt();
                    }
                    if nb + 1 < r {
                        out[(na * r + nb + 1, c)] += op.bd * v * ((nb + 1) as f64).sqrt();
                    }
                }
            }
        }
        out
    }
}

/// `α a + β a† + γ b + δ b†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linear {
    pub a: C64,
    pub ad: C64,
    pub b: C64,
    pub bd: C64,
}

impl Linear {
    fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self { a: z, ad: z, b: z, bd: z }
    }

    fn lower(mode: Mode) -> Self {
        let mut l = Self::zero();
        match mode {
            Mode::A => l.a = C64::new(1.0, 0.0),
            Mode::B => l.b = C64::new(1.0, 0.0),
        }
        l
    }

    fn raise(mode: Mode) -> Self {
        let mut l = Self::zero();
        match mode {
            Mode::A => l.ad = C64::new(1.0, 0.0),
            Mode::B => l.bd = C64::new(1.0, 0.0),
        }
        l
    }

    fn position(mode: Mode) -> Self {
        (Self::lower(mode) + Self::raise(mode)).scale(C64::from(FRAC_1_SQRT_2))
    }

    fn momentum(mode: Mode) -> Self {
        (Self::lower(mode) - Self::raise(mode)).scale(C64::new(0.0, -FRAC_1_SQRT_2))
    }

    fn scale(self, c: C64) -> Self {
        Self { a: self.a * c, ad: self.ad * c, b: self.b * c, bd: self.bd * c }
    }

    /// `B(θ)† L B(θ)`, using `B†aB = a cos θ − b sin θ`, `B†bB = b cos θ + a sin θ`.
    fn beamsplitter_conjugated(self, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        Self {
            a: self.a * c + self.b * s,
            b: self.b * c - self.a * s,
            ad: self.ad * c + self.bd * s,
            bd: self.bd * c - self.ad * s,
        }
    }

    /// `⟨m|L|l⟩` for two-mode occupations.
    fn element(&self, m: [usize; 2], l: [usize; 2]) -> C64 {
        let mut v = C64::new(0.0, 0.0);
        if m[1] == l[1] {
            if m[0] + 1 == l[0] {
                v += self.a * (l[0] as f64).sqrt();
            }
            if m[0] == l[0] + 1 {
                v += self.ad * (m[0] as f64).sqrt();
            }
        }
        if m[0] == l[0] {
            if m[1] + 1 == l[1] {
                v += self.b * (l[1] as f64).sqrt();
            }
            if m[1] == l[1] + 1 {
                v += self.bd * (m[1] as f64).sqrt();
            }
        }
        v
    }
}

impl std::ops::Add for Linear {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, ad: self.ad + o.ad, b: self.b + o.b, bd: self.bd + o.bd }
    }
}

impl std::ops::Sub for Linear {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(C64::new(-1.0, 0.0))
    }
}

fn inner_occupations(k: usize) -> Vec<[usize; 2]> {
    (0..=k).flat_map(|a| (0..=k).map(move |b| [a, b])).collect()
}

fn describe(r: ResidualRecord, params: &FresnelParams, lambda: f64, cutoff: usize, k: usize) -> ResidualRecord {
    r.with("s", params.s()).with("r", params.r()).with("lambda", lambda).with("cutoff", cutoff).with("k", k)
}

fn check_inputs(space: FockSpace, k: usize) -> Result<(), VerifyError> {
    if space.modes() != 2 {
        return Err(VerifyError::InvalidInput("the squeezing operator needs two modes".into()));
    }
    check_block(space, k)
}

/// Two records: `U†U = 1` on the inner block, from the Gram matrix of the
/// padded columns `U|l⟩`, and `U(−λ) = U(λ)†` on the inner block of the
/// compressions.
pub fn squeeze_unitarity_check(
    space: FockSpace,
    params: &FresnelParams,
    strength: SqueezeStrength,
    k: usize,
    tol: Tolerance,
) -> Result<Vec<ResidualRecord>, VerifyError> {
    check_inputs(space, k)?;
    let lambda = strength.lambda();
    let phi = SectorVectors::build(&w_columns(params, lambda, 2 * k), k);
    let gram = phi.data.adjoint() * &phi.data;
    let unit = spectral_norm(&(gram.clone() - DMatrix::identity(gram.nrows(), gram.ncols())));
    let u = squeeze_operator(space, params, strength)?.inner_block(k)?;
    let v = squeeze_operator(space, params, strength.inverse())?.inner_block(k)?;
    let inv = spectral_norm(&(v - u.adjoint()));
    Ok(vec![
        describe(ResidualRecord::new("squeeze.unitarity", unit, "spectral norm of (U†U - 1) on the inner block", tol), params, lambda, space.cutoff(), k),
        describe(ResidualRecord::new("squeeze.inverse", inv, "spectral norm of (U(-λ) - U(λ)†) on the inner block", tol), params, lambda, space.cutoff(), k),
    ])
}

/// `exp(G)` from the exponential form against [`squeeze_operator`] on the inner
/// block. The exponential acts on the inner basis columns in a padded two-mode
/// box that grows until the inner block stops changing.
pub fn squeeze_generator_check(
    space: FockSpace,
    params: &FresnelParams,
    strength: SqueezeStrength,
    k: usize,
    tol: Tolerance,
) -> Result<ResidualRecord, VerifyError> {
    check_inputs(space, k)?;
    let generator = squeeze_generator(params, strength);
    let occ = inner_occupations(k);
    let block_in_box = |box_cutoff: usize| -> Result<DMatrix<C64>, VerifyError> {
        let big = FockSpace::two(box_cutoff)?;
        let action = generator.compile(big)?;
        let rows: Vec<usize> = occ.iter().map(|o| big.index(o).expect("inner state in box")).collect();
        let mut cols = DMatrix::<C64>::zeros(big.dim(), occ.len());
        for (c, &r) in rows.iter().enumerate() {
            cols[(r, c)] = C64::new(1.0, 0.0);
        }
        let out = expm_action(&action, &cols);
        Ok(DMatrix::from_fn(occ.len(), occ.len(), |i, j| out[(rows[i], j)]))
    };
    let mut box_cutoff = 2 * k + BOX_STEP;
    let mut lhs = block_in_box(box_cutoff)?;
    loop {
        let next = block_in_box(box_cutoff + BOX_STEP)?;
        let change = (&next - &lhs).iter().map(|x| x.norm()).fold(0.0, f64::max);
        box_cutoff += BOX_STEP;
        lhs = next;
        if change <= BOX_CONVERGENCE || box_cutoff >= MAX_BOX_CUTOFF {
            break;
        }
    }
    let used = box_cutoff;
    let u = squeeze_operator(space, params, strength)?;
    let idx: Vec<usize> = occ.iter().map(|o| space.index(o).expect("inner state")).collect();
    let rhs = DMatrix::from_fn(occ.len(), occ.len(), |i, j| u.matrix()[(idx[i], idx[j])]);
    let residual = spectral_norm(&(lhs - rhs));
    Ok(describe(
        ResidualRecord::new("squeeze.generator", residual, "spectral norm of (exp G - U) on the inner block", tol),
        params,
        strength.lambda(),
        space.cutoff(),
        k,
    )
    .with("generator_box_cutoff", used))
}

/// At `s = 1, r = 0` the Fresnel factors cancel and `U = B S_b B†`; compares
/// [`squeeze_operator`] with the product of the truncated beam splitter and
/// squeezer, which is exact on every sector with `T ≤ cutoff`.
pub fn squeeze_collapse_check(space: FockSpace, strength: SqueezeStrength, k: usize, tol: Tolerance) -> Result<ResidualRecord, VerifyError> {
    check_inputs(space, k)?;
    let params = FresnelParams::identity();
    let u = squeeze_operator(space, &params, strength)?;
    let bs = beamsplitter(space, THETA)?;
    let sq = squeezer(space, Mode::B, strength)?;
    let product = bs.mul(&sq)?.mul(&bs.adjoint())?;
    let residual = spectral_norm(&(u.inner_block(k)? - product.inner_block(k)?));
    Ok(describe(
        ResidualRecord::new("squeeze.collapse", residual, "spectral norm of (U - B S B†) on the inner block at s=1, r=0", tol),
        &params,
        strength.lambda(),
        space.cutoff(),
        k,
    ))
}

/// Printed Heisenberg transforms as `(claim, X, U X U†)`.
pub fn printed_transforms(params: &FresnelParams, lambda: f64) -> Vec<(&'static str, Linear, Linear)> {
    let (s, r) = (params.s(), params.r());
    let (sc, rc) = (s.conj(), r.conj());
    let (ch, sh) = (C64::from(lambda.cosh()), C64::from(lambda.sinh()));
    let i = C64::i();
    let half = C64::from(0.5);
    let (a, b) = (Linear::lower(Mode::A), Linear::lower(Mode::B));
    let (ad, bd) = (Linear::raise(Mode::A), Linear::raise(Mode::B));
    let (qa, qb) = (Linear::position(Mode::A), Linear::position(Mode::B));
    let (pa, pb) = (Linear::momentum(Mode::A), Linear::momentum(Mode::B));
    let d = r * sc - s * rc;

    let ua = ((b - a).scale(d * sh - ch) + (bd - ad).scale((r * r - s * s) * sh) + (a + b)).scale(half);
    let ub = ((b - a).scale(ch - d * sh) + (bd - ad).scale((s * s - r * r) * sh) + (a + b)).scale(half);

    let q_mix = ((r - sc).powu(2) - (rc - s).powu(2)) * half * sh;
    let q_diag = ch - (r * r - s * s + rc * rc - sc * sc) * half * sh;
    let uqa = ((qa + qb) + (pa - pb).scale(i * q_mix) + (qa - qb).scale(q_diag)).scale(half);
    let uqb = ((qa + qb) - (pa - pb).scale(i * q_mix) + (qb - qa).scale(q_diag)).scale(half);

    let p_mix_a = ((r + sc).powu(2) - (rc + s).powu(2)) / (2.0 * i) * sh;
    let p_mix_b = ((rc + s).powu(2) - (r + sc).powu(2)) / (2.0 * i) * sh;
    let p_diag_a = (sc * sc - rc * rc - r * r + s * s) * half * sh - ch;
    let p_diag_b = (-sc * sc + rc * rc - s * s + r * r) * half * sh + ch;
    let upa = ((pa + pb) + (qb - qa).scale(p_mix_a) + (pb - pa).scale(p_diag_a)).scale(half);
    let upb = ((pa + pb) + (qb - qa).scale(p_mix_b) + (pb - pa).scale(p_diag_b)).scale(half);

    let q_diff = (pa - pb).scale(i * q_mix) + (qa - qb).scale(q_diag);
    let p_diff = (qb - qa).scale(-i * ((r + sc).powu(2) - (rc + s).powu(2)) * half * sh) + (pb - pa).scale(p_diag_a);

    vec![
        ("squeeze.heisenberg.a", a, ua),
        ("squeeze.heisenberg.b", b, ub),
        ("squeeze.heisenberg.q_a", qa, uqa),
        ("squeeze.heisenberg.q_b", qb, uqb),
        ("squeeze.heisenberg.p_a", pa, upa),
        ("squeeze.heisenberg.p_b", pb, upb),
        ("squeeze.heisenberg.q_sum", qa + qb, qa + qb),
        ("squeeze.heisenberg.q_diff", qa - qb, q_diff),
        ("squeeze.heisenberg.p_sum", pa + pb, pa + pb),
        ("squeeze.heisenberg.p_diff", pa - pb, p_diff),
    ]
}

/// One record per printed transform `U X U† = Σ c·(ladder)`: the inner block of
/// `U X U†`, computed as `⟨U†m| X |U†l⟩` from padded columns `U†|l⟩`, against
/// the inner block of the printed right-hand side, relative to the latter's
/// spectral norm.
pub fn squeeze_heisenberg_check(
    space: FockSpace,
    params: &FresnelParams,
    strength: SqueezeStrength,
    k: usize,
    tol: Tolerance,
) -> Result<Vec<ResidualRecord>, VerifyError> {
    check_inputs(space, k)?;
    let lambda = strength.lambda();
    let psi = SectorVectors::build(&w_columns(params, -lambda, 2 * k), k);
    let occ = inner_occupations(k);
    let mut out = Vec::new();
    for (claim, x, rhs) in printed_transforms(params, lambda) {
        let lhs = psi.data.adjoint() * psi.apply(&x.beamsplitter_conjugated(THETA));
        let expected = DMatrix::from_fn(occ.len(), occ.len(), |i, j| rhs.element(occ[i], occ[j]));
        let scale = spectral_norm(&expected).max(f64::MIN_POSITIVE);
        let residual = spectral_norm(&(lhs - expected)) / scale;
        out.push(describe(
            ResidualRecord::new(claim, residual, "spectral norm of (U X U† - printed form) on the inner block, relative to the printed form", tol),
            params,
            lambda,
            space.cutoff(),
            k,
        ));
    }
    Ok(out)
}

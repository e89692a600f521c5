use fock_core::{FockSpace, ModeSpec};
use gaussian_unitaries::{fresnel_params_from_ray, FresnelParams, RayMatrix, SqueezeStrength};
use ices_states::{BuildMethod, IcesLabel, KappaLabel};
use ices_verify::{
    classical_fresnel_check, coherent_kernel_check, commutator_negative_control, completeness_check, conjugate_commutator_check,
    degenerate_reduction_check, disk_point, eigen_residual, entanglement_witness, fresnel_ket_check, gaussian_formula_check,
    hermite_generating_check, identity_check, interior_specs, line_gaussian_check, method_equivalence_check, nascent_delta_check,
    overlap_factorization, product_entropy_check, random_probes, seeded_rng, squeeze_collapse_check, squeeze_generator_check,
    squeeze_heisenberg_check, squeeze_unitarity_check, validator_boundary_check, ClassicalGrid, EigenTarget, OperatorIdentity,
    RaySampler, ResidualRecord, Tolerance, VerifyError, C64, INTERIOR_RULE, MAX_QUADRATURE_WEIGHT,
};
use rand_chacha::ChaCha8Rng;

use crate::{RunConfig, SuiteId};

/// Tolerance just below 1 for ratio witnesses that must decrease strictly.
pub const STRICTLY_BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

// Pinned bounds of individual claims.
const EIGEN_TWO_MODE: f64 = 1e-5;
const DEGENERATE_LIMIT: f64 = 1e-7;
const OVERLAP_RATIO: f64 = 1e-7;
const VACUUM_SLICE: f64 = 1e-3;
const COMMUTATOR: f64 = 1e-10;
const NEGATIVE_CONTROL: f64 = 1e-9;
const HEISENBERG: f64 = 1e-7;
const HIGH_POWER: f64 = 1e-5;
const HERMITE: f64 = 1e-9;
const CLASSICAL: f64 = 1e-3;
const CLASSICAL_FOURIER: f64 = 1e-4;
const ENTANGLEMENT_BOUND: f64 = 0.1;
const ENTANGLEMENT_SHORTFALL: f64 = 1e-12;
const PRODUCT_ENTROPY: f64 = 1e-10;
const VALIDATOR_MISMATCHES: f64 = 0.5;

const HERMITE_MAX_N: usize = 12;
const HERMITE_POINTS: usize = 20;
const HERMITE_RADIUS: f64 = 2.0;
const GAUSSIAN_SPECS: usize = 50;
const KERNEL_SAMPLES: usize = 10;
const LINE_SAMPLES: usize = 20;
const MAX_RAY_DRAWS: usize = 10_000;

/// Per-suite filters on ray matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
struct RayFilter {
    max_r: f64,
    min_abs_b: f64,
    max_weight: f64,
}

impl RayFilter {
    fn for_suite(id: SuiteId) -> Self {
        let base = Self { max_r: 1.0, min_abs_b: 0.0, max_weight: f64::INFINITY };
        match id {
            SuiteId::Squeeze => Self { max_r: 0.8, ..base },
            SuiteId::Classical => Self { min_abs_b: 0.5, ..base },
            SuiteId::Identities => Self { max_weight: MAX_QUADRATURE_WEIGHT, ..base },
            _ => base,
        }
    }

    fn admits(&self, m: &RayMatrix) -> bool {
        let r_ok = fresnel_params_from_ray(m).map(|p| p.r().norm() <= self.max_r).unwrap_or(false);
        let weights = [m.d() * m.d() + m.b() * m.b(), m.a() * m.a() + m.c() * m.c()];
        r_ok && m.b().abs() >= self.min_abs_b && weights.iter().all(|w| *w <= self.max_weight)
    }
}

/// Stream of the suite's random generator: the run seed mixed with the suite
/// position, so suites draw independently of which others are selected.
fn suite_rng(cfg: &RunConfig, id: SuiteId) -> ChaCha8Rng {
    let stream = SuiteId::ALL.iter().position(|s| *s == id).unwrap_or(0) as u64 + 1;
    seeded_rng(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream))
}

/// Ray matrices for a suite: the explicit list filtered by the suite's
/// admissibility, or seeded random draws that satisfy it.
fn rays(cfg: &RunConfig, id: SuiteId, rng: &mut ChaCha8Rng) -> Result<Vec<RayMatrix>, VerifyError> {
    let filter = RayFilter::for_suite(id);
    if let Some(rows) = &cfg.abcd.explicit {
        let mut out = Vec::new();
        for r in rows {
            let m = RayMatrix::new(r[0], r[1], r[2], r[3])?;
            if filter.admits(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(VerifyError::InvalidInput(format!("no explicit ray matrix satisfies {filter:?}")));
        }
        return Ok(out);
    }
    let sampler = RaySampler { range: cfg.abcd.range, ..RaySampler::default() }.with_max_r(filter.max_r).with_min_abs_b(filter.min_abs_b);
    let count = cfg.suite_rays(id);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0;
    while out.len() < count {
        let m = sampler.draw(rng)?;
        draws += 1;
        if filter.admits(&m) {
            out.push(m);
        } else if draws >= MAX_RAY_DRAWS {
            return Err(VerifyError::InvalidInput(format!("ray filter {filter:?} rejected {MAX_RAY_DRAWS} draws")));
        }
    }
    Ok(out)
}

fn c(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

/// Records of one suite, accumulating errors as failing records.
struct Collector {
    suite: SuiteId,
    records: Vec<ResidualRecord>,
}

impl Collector {
    fn push(&mut self, context: &str, r: Result<ResidualRecord, VerifyError>) {
        match r {
            Ok(rec) => self.records.push(rec),
            Err(e) => self.error(context, e),
        }
    }

    fn extend(&mut self, context: &str, r: Result<Vec<ResidualRecord>, VerifyError>) {
        match r {
            Ok(recs) => self.records.extend(recs),
            Err(e) => self.error(context, e),
        }
    }

    fn error(&mut self, context: &str, e: VerifyError) {
        self.records.push(
            ResidualRecord::new(format!("{}.error", self.suite), f64::NAN, "check could not be evaluated", Tolerance::pinned(0.0))
                .with("context", context)
                .with("error", e.to_string()),
        );
    }
}

fn params_of(m: &RayMatrix) -> Result<FresnelParams, VerifyError> {
    Ok(fresnel_params_from_ray(m)?)
}

/// Runs one suite. Check failures never abort: invalid inputs become failing
/// records that carry the error message.
pub fn run_one(cfg: &RunConfig, id: SuiteId) -> Vec<ResidualRecord> {
    let mut out = Collector { suite: id, records: Vec::new() };
    let mut rng = suite_rng(cfg, id);
    let tiers = cfg.tiers();
    let cutoff = cfg.suite_cutoff(id);
    let k = cfg.suite_k(id);
    let l = &cfg.labels;
    let two = FockSpace::two(cutoff);
    let ray_list = match id {
        SuiteId::DegenerateLimits | SuiteId::Completeness | SuiteId::Gaussian => Vec::new(),
        _ => match rays(cfg, id, &mut rng) {
            Ok(r) => r,
            Err(e) => {
                out.error("ray matrices", e);
                return out.records;
            }
        },
    };
    let space = match two {
        Ok(s) => s,
        Err(e) => {
            out.error("space", e.into());
            return out.records;
        }
    };

    match id {
        SuiteId::FresnelKet => {
            for (i, m) in ray_list.iter().enumerate() {
                let q = l.q[i % l.q.len()];
                out.push("fresnel ket", params_of(m).and_then(|p| fresnel_ket_check(&p, q, cutoff, tiers.standard())));
            }
        }
        SuiteId::MethodEquivalence => {
            for m in &ray_list {
                for &z in &l.z {
                    for &q in &l.q {
                        let r = params_of(m)
                            .and_then(|p| Ok(IcesLabel::new(c(z), q, p)?))
                            .and_then(|label| method_equivalence_check(&label, space, k, tiers.standard()));
                        out.push("method equivalence", r);
                    }
                }
            }
        }
        SuiteId::EigenIcms | SuiteId::EigenImcs => {
            let values = if id == SuiteId::EigenIcms { &l.q } else { &l.p };
            for m in &ray_list {
                for &v in values {
                    let r = params_of(m).and_then(|params| {
                        let target = if id == SuiteId::EigenIcms { EigenTarget::Icms { q: v, params } } else { EigenTarget::Imcs { p: v, params } };
                        eigen_residual(&target, FockSpace::single(cutoff)?, k, tiers.standard())
                    });
                    out.extend("single-mode eigen relation", r);
                }
            }
        }
        SuiteId::EigenIces | SuiteId::EigenKappa => {
            let values = if id == SuiteId::EigenIces { &l.q } else { &l.p };
            for m in &ray_list {
                for &z in &l.z {
                    for &v in values {
                        let r = params_of(m).and_then(|params| {
                            let method = BuildMethod::ClosedForm;
                            let target = if id == SuiteId::EigenIces {
                                EigenTarget::Ices { label: IcesLabel::new(c(z), v, params)?, method }
                            } else {
                                EigenTarget::Kappa { label: KappaLabel::new(c(z), v, params)?, method }
                            };
                            eigen_residual(&target, space, k, Tolerance::pinned(EIGEN_TWO_MODE))
                        });
                        out.extend("two-mode eigen relation", r);
                    }
                }
            }
        }
        SuiteId::DegenerateLimits => {
            for &q in &l.q {
                out.extend("degenerate limits", degenerate_reduction_check(cutoff, q, Tolerance::pinned(DEGENERATE_LIMIT)));
            }
        }
        SuiteId::Overlap => {
            let n = l.z.len().max(l.q.len());
            for m in &ray_list {
                let p = match params_of(m) {
                    Ok(p) => p,
                    Err(e) => {
                        out.error("overlap ray", e);
                        continue;
                    }
                };
                for i in 0..n {
                    let a = (c(l.z[i % l.z.len()]), l.q[i % l.q.len()]);
                    let b = (c(l.z[(i + 1) % l.z.len()]), l.q[(i + 1) % l.q.len()]);
                    out.push("overlap factorization", overlap_factorization(a, b, &p, space, Tolerance::pinned(OVERLAP_RATIO)));
                }
            }
            let first = ray_list.first().ok_or_else(|| VerifyError::InvalidInput("no ray matrices".into()));
            let r = first.and_then(params_of).and_then(|p| {
                nascent_delta_check(C64::new(0.0, 0.0), l.q[0], &p, &l.delta_cutoffs, Tolerance::pinned(STRICTLY_BELOW_ONE))
            });
            out.push("nascent delta", r);
        }
        SuiteId::Completeness => {
            let cc = &cfg.completeness;
            let r = RayMatrix::new(cc.abcd[0], cc.abcd[1], cc.abcd[2], cc.abcd[3]).map_err(VerifyError::from).and_then(|m| params_of(&m));
            match r {
                Ok(p) => {
                    let scheme = cc.scheme();
                    out.extend("completeness block", completeness_check(&p, &scheme, space, cc.k, cc.refinements, tiers.quadrature()));
                    out.extend("completeness vacuum slice", completeness_check(&p, &scheme, space, 0, 0, Tolerance::pinned(VACUUM_SLICE)));
                }
                Err(e) => out.error("completeness ray", e),
            }
        }
        SuiteId::Commutator => {
            for m in &ray_list {
                out.push("commutator", conjugate_commutator_check(m, space, k, Tolerance::pinned(COMMUTATOR)));
            }
            out.push("negative control", commutator_negative_control(space, k, Tolerance::pinned(NEGATIVE_CONTROL)));
        }
        SuiteId::Squeeze => {
            for &lambda in &l.lambda {
                let strength = match SqueezeStrength::new(lambda) {
                    Ok(s) => s,
                    Err(e) => {
                        out.error("squeezing strength", e.into());
                        continue;
                    }
                };
                for m in &ray_list {
                    let p = match params_of(m) {
                        Ok(p) => p,
                        Err(e) => {
                            out.error("squeeze ray", e);
                            continue;
                        }
                    };
                    out.extend("squeeze unitarity", squeeze_unitarity_check(space, &p, strength, k, tiers.strict()));
                    out.push("squeeze generator", squeeze_generator_check(space, &p, strength, k, tiers.standard()));
                    out.extend("squeeze heisenberg", squeeze_heisenberg_check(space, &p, strength, k, Tolerance::pinned(HEISENBERG)));
                }
                out.push("squeeze collapse", squeeze_collapse_check(space, strength, k, tiers.strict()));
            }
        }
        SuiteId::Identities => {
            for m in &ray_list {
                let probes = random_probes(&mut rng, l.probes, l.probe_radius);
                let mut ids = vec![OperatorIdentity::ExpX, OperatorIdentity::ExpY];
                ids.extend(l.y.iter().map(|&y| OperatorIdentity::GaussX { y }));
                ids.extend(l.n.iter().map(|&n| OperatorIdentity::PowerX { n }));
                for id in ids {
                    let tol = match id {
                        OperatorIdentity::PowerX { n } if n >= 5 => Tolerance::pinned(HIGH_POWER),
                        _ => tiers.standard(),
                    };
                    out.push("operator identity", identity_check(id, m, &probes, space, tol));
                }
            }
            let xs: Vec<C64> = (0..HERMITE_POINTS).map(|_| disk_point(&mut rng, HERMITE_RADIUS)).collect();
            out.push("hermite", hermite_generating_check(HERMITE_MAX_N, &xs, Tolerance::pinned(HERMITE)));
        }
        SuiteId::Classical => {
            let grid = ClassicalGrid { cutoff, ..ClassicalGrid::default() };
            for m in &ray_list {
                for input in [ModeSpec::Vacuum, ModeSpec::Coherent(C64::new(0.5, 0.0))] {
                    out.push("classical fresnel", classical_fresnel_check(m, input, &grid, Tolerance::pinned(CLASSICAL)));
                }
            }
            out.push(
                "classical fourier",
                classical_fresnel_check(&RayMatrix::fourier(), ModeSpec::Vacuum, &grid, Tolerance::pinned(CLASSICAL_FOURIER)),
            );
        }
        SuiteId::Entanglement => {
            for m in &ray_list {
                for &z in &l.z {
                    for &q in &l.q {
                        let r = params_of(m)
                            .and_then(|p| Ok(IcesLabel::new(c(z), q, p)?))
                            .and_then(|label| entanglement_witness(&label, space, ENTANGLEMENT_BOUND, Tolerance::pinned(ENTANGLEMENT_SHORTFALL)));
                        out.push("entanglement witness", r);
                    }
                }
            }
            for i in 0..l.z.len() {
                let pair = [c(l.z[i]), c(l.z[(i + 1) % l.z.len()])];
                out.push("product entropy", product_entropy_check(pair, space, Tolerance::pinned(PRODUCT_ENTROPY)));
            }
        }
        SuiteId::Gaussian => {
            let specs = interior_specs(&mut rng, GAUSSIAN_SPECS);
            out.push("two-dimensional Gaussian", gaussian_formula_check(&specs, INTERIOR_RULE, tiers.strict()));
            out.push("coherent kernel", coherent_kernel_check(&mut rng, KERNEL_SAMPLES, tiers.strict()));
            out.push("one-dimensional Gaussian", line_gaussian_check(&mut rng, LINE_SAMPLES, tiers.strict()));
            out.records.push(validator_boundary_check(Tolerance::pinned(VALIDATOR_MISMATCHES)));
        }
    }
    out.records
}

/// Rough peak memory of a suite in bytes: one dense complex matrix on its
/// largest space.
pub fn estimated_bytes(cfg: &RunConfig, id: SuiteId) -> f64 {
    let cutoff = cfg.suite_cutoff(id) as f64;
    let dim = match id {
        SuiteId::FresnelKet => 2.0 * (8.0 * cutoff).max(128.0) + 1.0,
        SuiteId::EigenIcms | SuiteId::EigenImcs | SuiteId::DegenerateLimits | SuiteId::Classical => (cutoff + 1.0).powi(2),
        SuiteId::Overlap => {
            let top = cfg.labels.delta_cutoffs.iter().copied().max().unwrap_or(0) as f64;
            (top.max(cutoff) + 1.0).powi(2)
        }
        SuiteId::Gaussian => 0.0,
        _ => (cutoff + 1.0).powi(2),
    };
    16.0 * dim * dim
}

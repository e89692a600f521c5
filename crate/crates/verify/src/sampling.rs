use gaussian_unitaries::{fresnel_params_from_ray, RayMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{VerifyError, C64};

/// Seeded generator used by every randomized check.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ranges and filters for random unimodular ray matrices. `A`, `B`, `C` are
/// uniform on `[−range, range]` and `D = (1 + BC)/A`; draws with `|A|` below
/// `min_abs_a`, `|r|` above `max_r` or `|B|` below `min_abs_b` are redrawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySampler {
    pub range: f64,
    pub min_abs_a: f64,
    pub max_r: f64,
    pub min_abs_b: f64,
}

impl Default for RaySampler {
    fn default() -> Self {
        Self { range: 1.5, min_abs_a: 0.2, max_r: 1.0, min_abs_b: 0.0 }
    }
}

const MAX_DRAWS: usize = 100_000;

impl RaySampler {
    pub fn with_max_r(self, max_r: f64) -> Self {
        Self { max_r, ..self }
    }

    pub fn with_min_abs_b(self, min_abs_b: f64) -> Self {
        Self { min_abs_b, ..self }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Result<RayMatrix, VerifyError> {
        if !(self.range > self.min_abs_a && self.min_abs_a >= 0.2 && self.max_r > 0.0 && self.min_abs_b < self.range) {
            return Err(VerifyError::InvalidInput(format!("unsatisfiable ray sampler {self:?}")));
        }
        for _ in 0..MAX_DRAWS {
            let a = rng.gen_range(-self.range..=self.range);
            let b = rng.gen_range(-self.range..=self.range);
            let c = rng.gen_range(-self.range..=self.range);
            if a.abs() < self.min_abs_a || b.abs() < self.min_abs_b {
                continue;
            }
            let m = RayMatrix::from_abc(a, b, c)?;
            if fresnel_params_from_ray(&m)?.r().norm() <= self.max_r {
                return Ok(m);
            }
        }
        Err(VerifyError::InvalidInput(format!("ray sampler {self:?} rejected {MAX_DRAWS} draws")))
    }

    pub fn draw_many(&self, rng: &mut impl Rng, count: usize) -> Result<Vec<RayMatrix>, VerifyError> {
        (0..count).map(|_| self.draw(rng)).collect()
    }
}

/// Uniform point of the disk `|z| ≤ radius`.
pub fn disk_point(rng: &mut impl Rng, radius: f64) -> C64 {
    let rho = radius * rng.gen_range(0.0f64..=1.0).sqrt();
    C64::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Two-mode coherent probe `(⟨z′_a, z′_b|, |z_a, z_b⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub bra: [C64; 2],
    pub ket: [C64; 2],
}

impl Probe {
    /// Labels with the two modes exchanged.
    pub fn swapped(&self) -> Self {
        Self { bra: [self.bra[1], self.bra[0]], ket: [self.ket[1], self.ket[0]] }
    }
}

pub fn random_probes(rng: &mut impl Rng, count: usize, radius: f64) -> Vec<Probe> {
    (0..count)
        .map(|_| Probe {
            bra: [disk_point(rng, radius), disk_point(rng, radius)],
            ket: [disk_point(rng, radius), disk_point(rng, radius)],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_unimodular_and_filtered() {
        let mut rng = seeded_rng(7);
        let s = RaySampler::default().with_max_r(0.8).with_min_abs_b(0.5);
        for m in s.draw_many(&mut rng, 40).unwrap() {
            assert!(m.unimodularity_defect() < 1e-12);
            assert!(m.a().abs() >= 0.2 && m.b().abs() >= 0.5);
            assert!(fresnel_params_from_ray(&m).unwrap().r().norm() <= 0.8);
        }
    }

    #[test]
    fn same_seed_same_draws() {
        let s = RaySampler::default();
        let x = s.draw_many(&mut seeded_rng(3), 5).unwrap();
        let y = s.draw_many(&mut seeded_rng(3), 5).unwrap();
        assert_eq!(x, y);
        let p = random_probes(&mut seeded_rng(3), 9, 0.8);
        assert!(p.iter().all(|p| p.bra.iter().chain(&p.ket).all(|z| z.norm() <= 0.8)));
    }
}

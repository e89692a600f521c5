use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use gaussian_unitaries::{RayMatrix, INVARIANT_TOLERANCE};
use ices_numerics::{PlanarRule, QRule, QuadratureScheme, Rule1d};
use ices_verify::{Tiers, MAX_POWER, MAX_PROBE_AMPLITUDE};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Identifiers of the runnable suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteId {
    FresnelKet,
    MethodEquivalence,
    EigenIcms,
    EigenImcs,
    EigenIces,
    EigenKappa,
    DegenerateLimits,
    Overlap,
    Completeness,
    Commutator,
    Squeeze,
    Identities,
    Classical,
    Entanglement,
    Gaussian,
}

impl SuiteId {
    pub const ALL: [SuiteId; 15] = [
        SuiteId::FresnelKet,
        SuiteId::MethodEquivalence,
        SuiteId::EigenIcms,
        SuiteId::EigenImcs,
        SuiteId::EigenIces,
        SuiteId::EigenKappa,
        SuiteId::DegenerateLimits,
        SuiteId::Overlap,
        SuiteId::Completeness,
        SuiteId::Commutator,
        SuiteId::Squeeze,
        SuiteId::Identities,
        SuiteId::Classical,
        SuiteId::Entanglement,
        SuiteId::Gaussian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::FresnelKet => "fresnel_ket",
            SuiteId::MethodEquivalence => "method_equivalence",
            SuiteId::EigenIcms => "eigen_residual:icms",
            SuiteId::EigenImcs => "eigen_residual:imcs",
            SuiteId::EigenIces => "eigen_residual:ices",
            SuiteId::EigenKappa => "eigen_residual:kappa",
            SuiteId::DegenerateLimits => "degenerate_limits",
            SuiteId::Overlap => "overlap",
            SuiteId::Completeness => "completeness",
            SuiteId::Commutator => "commutator",
            SuiteId::Squeeze => "squeeze",
            SuiteId::Identities => "identities",
            SuiteId::Classical => "classical",
            SuiteId::Entanglement => "entanglement",
            SuiteId::Gaussian => "gaussian",
        }
    }

    /// Per-mode cutoff used when neither the config nor a suite override sets one.
    pub fn builtin_cutoff(self) -> Option<usize> {
        match self {
            SuiteId::FresnelKet | SuiteId::EigenIcms | SuiteId::EigenImcs | SuiteId::DegenerateLimits => Some(32),
            SuiteId::Completeness => Some(10),
            SuiteId::Commutator => Some(12),
            SuiteId::Identities => Some(24),
            SuiteId::Classical => Some(40),
            _ => None,
        }
    }

    /// Number of random ray matrices drawn when no override is given.
    pub fn builtin_rays(self) -> Option<usize> {
        match self {
            SuiteId::FresnelKet => Some(25),
            SuiteId::Classical => Some(10),
            SuiteId::Squeeze | SuiteId::Identities => Some(2),
            SuiteId::Entanglement => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| CliError::config("suites", format!("unknown suite id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Source of ray matrices: an explicit list of `[A, B, C, D]` rows, or seeded
/// random draws with `A, B, C` uniform on `[−range, range]`, `|A| ≥ 0.2` and
/// `D = (1 + BC)/A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AbcdConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit: Option<Vec<[f64; 4]>>,
    pub count: usize,
    pub range: f64,
}

impl Default for AbcdConfig {
    fn default() -> Self {
        Self { explicit: None, count: 5, range: 1.5 }
    }
}

/// Label grids. Complex labels are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LabelGrids {
    pub z: Vec<[f64; 2]>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub lambda: Vec<f64>,
    pub y: Vec<f64>,
    pub n: Vec<usize>,
    pub probes: usize,
    pub probe_radius: f64,
    pub delta_cutoffs: Vec<usize>,
}

impl Default for LabelGrids {
    fn default() -> Self {
        Self {
            z: vec![[0.0, 0.0], [0.5, 0.0], [0.3, -0.4]],
            q: vec![-0.7, 0.0, 1.0],
            p: vec![-0.5, 0.4],
            lambda: vec![0.5, -0.3],
            y: vec![0.05, 0.2],
            n: (1..=MAX_POWER).collect(),
            probes: 9,
            probe_radius: MAX_PROBE_AMPLITUDE,
            delta_cutoffs: vec![16, 24, 32],
        }
    }
}

/// Quadrature scheme of the completeness suite: Gauss–Legendre in `q` and a
/// polar grid in `z`, refined by doubling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompletenessConfig {
    pub abcd: [f64; 4],
    pub q_half_width: f64,
    pub q_order: usize,
    pub z_radius: f64,
    pub z_radial: usize,
    pub z_angular: usize,
    pub refinements: usize,
    pub k: usize,
}

impl Default for CompletenessConfig {
    fn default() -> Self {
        let s = QuadratureScheme::default();
        let half_width = match s.q_rule.kind {
            Rule1d::GaussLegendre { half_width } => half_width,
            _ => 6.0,
        };
        Self {
            abcd: [1.0, 0.0, 0.0, 1.0],
            q_half_width: half_width,
            q_order: s.q_rule.order,
            z_radius: s.z_rule.radius,
            z_radial: s.z_rule.n_radial,
            z_angular: s.z_rule.n_angular,
            refinements: 3,
            k: 3,
        }
    }
}

impl CompletenessConfig {
    pub fn scheme(&self) -> QuadratureScheme {
        QuadratureScheme {
            q_rule: QRule { kind: Rule1d::GaussLegendre { half_width: self.q_half_width }, order: self.q_order },
            z_rule: PlanarRule::new(self.z_radius, self.z_radial, self.z_angular),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TierConfig {
    pub strict: f64,
    pub standard: f64,
    pub quadrature: f64,
}

impl Default for TierConfig {
    fn default() -> Self {
        let t = Tiers::default();
        Self { strict: t.strict, standard: t.standard, quadrature: t.quadrature }
    }
}

impl From<TierConfig> for Tiers {
    fn from(t: TierConfig) -> Self {
        Tiers { strict: t.strict, standard: t.standard, quadrature: t.quadrature }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<usize>,
}

/// Full run configuration. Every field has a default, so an empty file is a
/// valid config that runs all suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub suites: Vec<String>,
    pub cutoff: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub seed: u64,
    pub workers: usize,
    pub reproducible: bool,
    pub memory_ceiling_mb: f64,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub abcd: AbcdConfig,
    pub labels: LabelGrids,
    pub completeness: CompletenessConfig,
    pub tolerances: TierConfig,
    pub suite: BTreeMap<String, SuiteOverride>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suites: vec!["all".into()],
            cutoff: 16,
            k: None,
            seed: 20_240_917,
            workers: 1,
            reproducible: false,
            memory_ceiling_mb: 1024.0,
            format: Format::Json,
            out: None,
            strict: false,
            abcd: AbcdConfig::default(),
            labels: LabelGrids::default(),
            completeness: CompletenessConfig::default(),
            tolerances: TierConfig::default(),
            suite: BTreeMap::new(),
        }
    }
}

/// Command-line values that replace their config counterparts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CliOverrides {
    pub suites: Vec<String>,
    pub cutoff: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub strict: bool,
}

/// Largest `|z|` accepted by strict validation; beyond it coherent tails leak
/// past the default cutoffs.
pub const MAX_LABEL_Z: f64 = 1.5;
/// Largest `|q|`, `|p|` accepted by strict validation.
pub const MAX_LABEL_QP: f64 = 4.0;
/// Largest squeezing `|λ|` accepted by strict validation.
pub const MAX_LAMBDA: f64 = 0.5;
/// Largest Gaussian weight `y` accepted by strict validation.
pub const MAX_Y: f64 = 0.2;

impl RunConfig {
    /// Parses TOML. Unknown keys are returned as dotted paths; the caller
    /// decides whether they are fatal.
    pub fn from_toml_str(text: &str) -> Result<(Self, Vec<String>), CliError> {
        let de = toml::Deserializer::parse(text).map_err(|e| CliError::config("<file>", e.to_string()))?;
        let mut unknown = Vec::new();
        let cfg: RunConfig = serde_ignored::deserialize(de, |path| unknown.push(path.to_string()))
            .map_err(|e| CliError::config("<file>", e.to_string()))?;
        Ok((cfg, unknown))
    }

    /// Rebuilds a config from the echo embedded in a JSON report.
    pub fn from_echo(value: &serde_json::Value) -> Result<Self, CliError> {
        serde_json::from_value(value.clone()).map_err(|e| CliError::config("config", e.to_string()))
    }

    pub fn apply(&mut self, o: &CliOverrides) {
        if !o.suites.is_empty() {
            self.suites = o.suites.clone();
        }
        if let Some(c) = o.cutoff {
            self.cutoff = c;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        self.strict |= o.strict;
    }

    /// Selected suites in canonical order, with `all` expanded and duplicates
    /// removed.
    pub fn selected_suites(&self) -> Result<Vec<SuiteId>, CliError> {
        let mut ids = Vec::new();
        for s in &self.suites {
            if s == "all" {
                ids.extend(SuiteId::ALL);
            } else {
                ids.push(s.parse()?);
            }
        }
        ids.sort();
        ids.dedup();
        Ok(ids)
    }

    pub fn tiers(&self) -> Tiers {
        self.tolerances.into()
    }

    pub fn suite_cutoff(&self, id: SuiteId) -> usize {
        self.suite.get(id.as_str()).and_then(|o| o.cutoff).or(id.builtin_cutoff()).unwrap_or(self.cutoff)
    }

    /// Inner-block size: the suite override, then the global `k`, then half the
    /// suite cutoff.
    pub fn suite_k(&self, id: SuiteId) -> usize {
        let cutoff = self.suite_cutoff(id);
        self.suite.get(id.as_str()).and_then(|o| o.k).or(self.k).unwrap_or(cutoff / 2).min(cutoff)
    }

    pub fn suite_rays(&self, id: SuiteId) -> usize {
        self.suite.get(id.as_str()).and_then(|o| o.rays).or(id.builtin_rays()).unwrap_or(self.abcd.count)
    }

    /// Checks invariants that hold in every mode, normalizes the suite list and
    /// returns the labels that are out of range. Strict mode turns those into
    /// errors.
    pub fn validate(&mut self) -> Result<Vec<String>, CliError> {
        let ids = self.selected_suites()?;
        self.suites = ids.iter().map(|id| id.as_str().to_owned()).collect();
        for key in self.suite.keys() {
            key.parse::<SuiteId>().map_err(|_| CliError::config(format!("suite.{key}"), "unknown suite id"))?;
        }
        let t = self.tiers();
        if !t.all_positive() {
            return Err(CliError::config("tolerances", "every tolerance must be positive and finite"));
        }
        if self.cutoff == 0 {
            return Err(CliError::config("cutoff", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(CliError::config("workers", "must be at least 1"));
        }
        if !(self.memory_ceiling_mb > 0.0) {
            return Err(CliError::config("memory_ceiling_mb", "must be positive"));
        }
        if let Some(rows) = &self.abcd.explicit {
            if rows.is_empty() {
                return Err(CliError::config("abcd.explicit", "empty list"));
            }
            for (i, r) in rows.iter().enumerate() {
                check_ray(&format!("abcd.explicit[{i}]"), r)?;
            }
        } else if !(self.abcd.range > 0.2) {
            return Err(CliError::config("abcd.range", "must exceed the |A| >= 0.2 guard"));
        }
        check_ray("completeness.abcd", &self.completeness.abcd)?;
        self.completeness.scheme().validate().map_err(|e| CliError::config("completeness", e.to_string()))?;
        if self.labels.delta_cutoffs.len() < 2 || self.labels.delta_cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config("labels.delta_cutoffs", "need at least two increasing cutoffs"));
        }
        for (name, empty) in [
            ("labels.z", self.labels.z.is_empty()),
            ("labels.q", self.labels.q.is_empty()),
            ("labels.p", self.labels.p.is_empty()),
            ("labels.lambda", self.labels.lambda.is_empty()),
        ] {
            if empty {
                return Err(CliError::config(name, "empty grid"));
            }
        }

        let l = &self.labels;
        let mut out_of_range = Vec::new();
        let mut flag = |ok: bool, what: String| {
            if !ok {
                out_of_range.push(what);
            }
        };
        for z in &l.z {
            flag(z[0].hypot(z[1]) <= MAX_LABEL_Z, format!("labels.z {z:?} exceeds |z| <= {MAX_LABEL_Z}"));
        }
        for v in l.q.iter().chain(&l.p) {
            flag(v.abs() <= MAX_LABEL_QP, format!("labels.q/p {v} exceeds |q|, |p| <= {MAX_LABEL_QP}"));
        }
        for v in &l.lambda {
            flag(v.abs() <= MAX_LAMBDA, format!("labels.lambda {v} exceeds |λ| <= {MAX_LAMBDA}"));
        }
        for v in &l.y {
            flag(*v > 0.0 && *v <= MAX_Y, format!("labels.y {v} outside (0, {MAX_Y}]"));
        }
        for v in &l.n {
            flag((1..=MAX_POWER).contains(v), format!("labels.n {v} outside 1..={MAX_POWER}"));
        }
        flag(
            l.probe_radius > 0.0 && l.probe_radius <= MAX_PROBE_AMPLITUDE,
            format!("labels.probe_radius {} outside (0, {MAX_PROBE_AMPLITUDE}]", l.probe_radius),
        );
        flag(l.probes > 0, "labels.probes must be positive".into());
        if self.strict && !out_of_range.is_empty() {
            return Err(CliError::config("labels", out_of_range.join("; ")));
        }
        Ok(out_of_range)
    }
}

fn check_ray(field: &str, r: &[f64; 4]) -> Result<RayMatrix, CliError> {
    let det = r[0] * r[3] - r[1] * r[2];
    if !r.iter().all(|v| v.is_finite()) || (det - 1.0).abs() > INVARIANT_TOLERANCE {
        return Err(CliError::config(field, format!("ray matrix {r:?} is not unimodular: AD - BC = {det}")));
    }
    RayMatrix::new(r[0], r[1], r[2], r[3]).map_err(|e| CliError::config(field, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        let (cfg, unknown) = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert!(unknown.is_empty());
    }

    #[test]
    fn unknown_keys_are_reported() {
        let (_, unknown) = RunConfig::from_toml_str("cutof = 3\n[labels]\nzz = 1\n").unwrap();
        assert_eq!(unknown, vec!["cutof".to_string(), "labels.zz".to_string()]);
    }

    #[test]
    fn non_unimodular_ray_names_the_determinant() {
        let (mut cfg, _) = RunConfig::from_toml_str("[abcd]\nexplicit = [[2.0, 0.0, 0.0, 1.0]]\n").unwrap();
        let e = cfg.validate().unwrap_err().to_string();
        assert!(e.contains("AD - BC = 2"), "{e}");
    }

    #[test]
    fn suites_are_expanded_and_sorted() {
        let (mut cfg, _) = RunConfig::from_toml_str("suites = [\"gaussian\", \"eigen_residual:icms\", \"gaussian\"]").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.suites, vec!["eigen_residual:icms", "gaussian"]);
        let (mut cfg, _) = RunConfig::from_toml_str("suites = [\"nope\"]").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn strict_rejects_out_of_range_labels() {
        let text = "[labels]\nlambda = [0.9]\n";
        let (mut cfg, _) = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.validate().unwrap().len(), 1);
        let (mut cfg, _) = RunConfig::from_toml_str(text).unwrap();
        cfg.strict = true;
        assert!(matches!(cfg.validate(), Err(CliError::Config { .. })));
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut cfg = RunConfig::default();
        cfg.apply(&CliOverrides { suites: vec!["squeeze".into()], cutoff: Some(20), seed: Some(3), ..Default::default() });
        assert_eq!((cfg.suites.clone(), cfg.cutoff, cfg.seed), (vec!["squeeze".to_string()], 20, 3));
        assert_eq!(cfg.suite_cutoff(SuiteId::Squeeze), 20);
        assert_eq!(cfg.suite_cutoff(SuiteId::Completeness), 10);
        assert_eq!(cfg.suite_k(SuiteId::Squeeze), 10);
    }

    #[test]
    fn zero_tolerance_is_rejected() {
        let (mut cfg, _) = RunConfig::from_toml_str("[tolerances]\nstrict = 0.0\n").unwrap();
        assert!(cfg.validate().is_err());
    }
}

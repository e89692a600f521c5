use std::collections::BTreeMap;
use std::fmt;

use crate::C64;

/// Named tolerance tiers. `Pinned` marks a claim-specific bound that does not
/// follow the configurable tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    Strict,
    Standard,
    Quadrature,
    Pinned,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Strict => "strict",
            Tier::Standard => "standard",
            Tier::Quadrature => "quadrature",
            Tier::Pinned => "pinned",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values of the configurable tiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tiers {
    pub strict: f64,
    pub standard: f64,
    pub quadrature: f64,
}

impl Default for Tiers {
    fn default() -> Self {
        Self { strict: 1e-8, standard: 1e-6, quadrature: 1e-2 }
    }
}

impl Tiers {
    pub fn strict(&self) -> Tolerance {
        Tolerance { tier: Tier::Strict, value: self.strict }
    }

    pub fn standard(&self) -> Tolerance {
        Tolerance { tier: Tier::Standard, value: self.standard }
    }

    pub fn quadrature(&self) -> Tolerance {
        Tolerance { tier: Tier::Quadrature, value: self.quadrature }
    }

    pub fn all_positive(&self) -> bool {
        [self.strict, self.standard, self.quadrature].iter().all(|t| *t > 0.0 && t.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub tier: Tier,
    pub value: f64,
}

impl Tolerance {
    pub fn pinned(value: f64) -> Self {
        Self { tier: Tier::Pinned, value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// A parameter echoed into a record.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Real(f64),
    Complex(C64),
    Int(i64),
    Text(String),
    Reals(Vec<f64>),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<C64> for ParamValue {
    fn from(v: C64) -> Self {
        ParamValue::Complex(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

impl From<Vec<f64>> for ParamValue {
    fn from(v: Vec<f64>) -> Self {
        ParamValue::Reals(v)
    }
}

/// One quantified check. The verdict is derived: pass iff the residual is a
/// number no larger than the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRecord {
    pub claim: String,
    pub params: BTreeMap<String, ParamValue>,
    pub residual: f64,
    pub norm_basis: String,
    pub tolerance: Tolerance,
    pub verdict: Verdict,
}

impl ResidualRecord {
    pub fn new(claim: impl Into<String>, residual: f64, norm_basis: impl Into<String>, tolerance: Tolerance) -> Self {
        let verdict = if residual.is_finite() && residual >= 0.0 && residual <= tolerance.value {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self { claim: claim.into(), params: BTreeMap::new(), residual, norm_basis: norm_basis.into(), tolerance, verdict }
    }

    pub fn with(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// Verdicts of a record list: pass iff every record passes.
pub fn all_pass(records: &[ResidualRecord]) -> bool {
    records.iter().all(ResidualRecord::passed)
}

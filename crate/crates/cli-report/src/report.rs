use std::fmt::Write as _;
use std::path::Path;

use ices_verify::{ParamValue, ResidualRecord};
use serde_json::{Map, Number, Value};

use crate::{CliError, Format, RunConfig, SuiteId};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub id: SuiteId,
    pub records: Vec<ResidualRecord>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(ResidualRecord::passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub version: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub total_seconds: f64,
}

impl VerificationReport {
    /// Pass iff every record of every suite passes; an empty report passes.
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn record_count(&self) -> usize {
        self.suites.iter().map(|s| s.records.len()).sum()
    }

    /// Process exit status for a completed run: 0 on pass, 1 on any failure.
    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut root = self.body_json();
        let mut timings = Map::new();
        timings.insert("total_seconds".into(), float(self.total_seconds));
        let per: Map<String, Value> = self.suites.iter().map(|s| (s.id.as_str().to_owned(), float(s.seconds))).collect();
        timings.insert("suites".into(), Value::Object(per));
        root.as_object_mut().expect("report root is an object").insert("timings".into(), Value::Object(timings));
        root
    }

    /// The report without timings, the part that must repeat exactly.
    pub fn body_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("version".into(), Value::String(self.version.clone()));
        root.insert("config".into(), serde_json::to_value(&self.config).expect("config serializes"));
        root.insert("suites".into(), Value::Array(self.suites.iter().map(suite_json).collect()));
        root.insert("verdict".into(), verdict(self.passed()));
        Value::Object(root)
    }

    /// One row per record: suite, claim, residual, tolerance, verdict.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "claim", "residual", "tolerance", "verdict"]).expect("in-memory write");
        for s in &self.suites {
            for r in &s.records {
                w.write_record([s.id.as_str(), &r.claim, &csv_float(r.residual), &csv_float(r.tolerance.value), r.verdict.as_str()])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn verdict(pass: bool) -> Value {
    Value::String(if pass { "pass" } else { "fail" }.into())
}

/// Finite floats become JSON numbers; NaN and infinities become null.
fn float(v: f64) -> Value {
    Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn csv_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn param_json(p: &ParamValue) -> Value {
    match p {
        ParamValue::Real(v) => float(*v),
        ParamValue::Complex(z) => {
            let mut m = Map::new();
            m.insert("re".into(), float(z.re));
            m.insert("im".into(), float(z.im));
            Value::Object(m)
        }
        ParamValue::Int(i) => Value::Number((*i).into()),
        ParamValue::Text(s) => Value::String(s.clone()),
        ParamValue::Reals(v) => Value::Array(v.iter().map(|x| float(*x)).collect()),
    }
}

fn record_json(r: &ResidualRecord) -> Value {
    let mut m = Map::new();
    m.insert("claim".into(), Value::String(r.claim.clone()));
    m.insert("params".into(), Value::Object(r.params.iter().map(|(k, v)| (k.clone(), param_json(v))).collect()));
    m.insert("residual".into(), float(r.residual));
    m.insert("norm_basis".into(), Value::String(r.norm_basis.clone()));
    m.insert("tolerance".into(), float(r.tolerance.value));
    m.insert("tier".into(), Value::String(r.tolerance.tier.as_str().into()));
    m.insert("verdict".into(), Value::String(r.verdict.as_str().into()));
    Value::Object(m)
}

fn suite_json(s: &SuiteReport) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), Value::String(s.id.as_str().into()));
    m.insert("records".into(), Value::Array(s.records.iter().map(record_json).collect()));
    m.insert("verdict".into(), verdict(s.passed()));
    Value::Object(m)
}

/// Canonical text: keys sorted, two-space indentation, integers verbatim and
/// every other number with 17 significant digits in exponent form, so parsing
/// and re-emitting reproduces the bytes.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").expect("write to string");
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").expect("write to string");
            } else {
                let f = n.as_f64().expect("number is f64");
                write!(out, "{f:.16e}").expect("write to string");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                indent(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(out, &map[*k], depth + 1);
            }
            out.push('\n');
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Renders the report in `format`.
pub fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => canonical_json(&report.to_json()),
        Format::Csv => report.to_csv(),
    }
}

/// Writes the rendered report to `path`, or to standard output without one.
pub fn emit_report(report: &VerificationReport, format: Format, path: Option<&Path>) -> Result<String, CliError> {
    let text = render(report, format);
    match path {
        Some(p) => std::fs::write(p, &text).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?,
        None => print!("{text}"),
    }
    Ok(text)
}

/// Parses emitted JSON and emits it again.
pub fn reserialize(text: &str) -> Result<String, serde_json::Error> {
    Ok(canonical_json(&serde_json::from_str::<Value>(text)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ices_verify::Tolerance;

    fn sample() -> VerificationReport {
        let rec = ResidualRecord::new("x.y", 1.234e-9, "abs", Tolerance::pinned(1e-8))
            .with("z", ices_verify::C64::new(0.1, -0.2))
            .with("n", 3usize)
            .with("trend", vec![0.3, 0.1])
            .with("note", "a \"quoted\" string");
        let bad = ResidualRecord::new("x.error", f64::NAN, "n/a", Tolerance::pinned(0.0));
        VerificationReport {
            version: TOOL_VERSION.into(),
            config: RunConfig::default(),
            suites: vec![SuiteReport { id: SuiteId::Gaussian, records: vec![rec, bad], seconds: 0.5 }],
            total_seconds: 0.5,
        }
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let text = canonical_json(&sample().to_json());
        assert_eq!(reserialize(&text).unwrap(), text);
        assert!(text.contains("\"residual\": null"));
        assert!(text.contains("\"residual\": 1.2340000000000001e-9"));
    }

    #[test]
    fn keys_are_sorted() {
        let text = canonical_json(&sample().to_json());
        let pos = |k: &str| text.find(&format!("\n  \"{k}\":")).unwrap();
        assert!(pos("config") < pos("suites") && pos("suites") < pos("timings") && pos("timings") < pos("verdict"));
    }

    #[test]
    fn csv_has_one_row_per_record() {
        let r = sample();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 1 + r.record_count());
        assert!(csv.lines().nth(2).unwrap().starts_with("gaussian,x.error,,"));
    }

    #[test]
    fn empty_report_passes() {
        let r = VerificationReport { suites: vec![], ..sample() };
        assert!(r.passed());
        assert_eq!(r.exit_code(), 0);
        assert_eq!(sample().exit_code(), 1);
    }

    #[test]
    fn config_echo_rebuilds_the_config() {
        let r = sample();
        let v = r.to_json();
        assert_eq!(RunConfig::from_echo(&v["config"]).unwrap(), r.config);
    }
}

use std::path::Path;
use std::process::{Command, Output};

use cli_report::{canonical_json, reserialize, RunConfig};
use proptest::prelude::*;
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_verify");

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn passing_run_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"commutator\"]\nreproducible = true\n");
    let report = dir.path().join("report.json");
    let out = run(&["--config", cfg.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    assert_eq!(reserialize(&text).unwrap(), text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["suites"][0]["id"], "commutator");
    assert_eq!(v["timings"]["total_seconds"], 0.0);
    let echoed = RunConfig::from_echo(&v["config"]).unwrap();
    assert_eq!(echoed.suites, vec!["commutator".to_string()]);
    assert!(echoed.reproducible);
}

#[test]
fn failing_residuals_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // The strict tier drives the Gaussian spec comparison, which cannot reach 1e-300.
    let cfg = write_config(dir.path(), "suites = [\"gaussian\"]\n[tolerances]\nstrict = 1e-300\n");
    let out = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn csv_has_a_header_and_one_row_per_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"commutator\"]\n");
    let out = run(&["--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,claim,residual,tolerance,verdict"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.starts_with("commutator,") && r.ends_with(",pass")));
}

#[test]
fn command_line_suite_replaces_the_config_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"all\"]\nreproducible = true\n");
    let out = run(&["--config", cfg.to_str().unwrap(), "--suite", "commutator", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suites"].as_array().unwrap().len(), 1);
    assert_eq!(v["config"]["seed"], 5);
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("cutoff = \"sixteen\"\n", "cutoff"),
        ("suites = [\"nonsense\"]\n", "nonsense"),
        ("[abcd]\nexplicit = [[1.0, 1.0, 1.0, 1.0]]\n", "AD - BC"),
        ("[tolerances]\nstrict = -1.0\n", "tolerances"),
    ];
    for (text, needle) in cases {
        let cfg = write_config(dir.path(), text);
        let out = run(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{text}: {}", stderr(&out));
        assert!(stderr(&out).contains(needle), "{text}: {}", stderr(&out));
    }
    assert_eq!(code(&run(&["--config", dir.path().join("missing.toml").to_str().unwrap()])), 2);
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["--config", "x.toml", "--format", "xml"])), 2);
}

#[test]
fn unknown_keys_warn_unless_strict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"commutator\"]\ncolour = \"blue\"\n");
    let lenient = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&lenient), 0, "{}", stderr(&lenient));
    assert!(stderr(&lenient).contains("colour"));
    let strict = run(&["--config", cfg.to_str().unwrap(), "--strict"]);
    assert_eq!(code(&strict), 2);
    assert!(stderr(&strict).contains("colour"));
}

#[test]
fn out_of_range_labels_are_fatal_only_in_strict_mode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"commutator\"]\n[labels]\nlambda = [2.0]\n");
    let lenient = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&lenient), 0, "{}", stderr(&lenient));
    assert!(stderr(&lenient).contains("labels.lambda"));
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap(), "--strict"])), 2);
}

#[test]
fn oversized_runs_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = run(&["--config", cfg.to_str().unwrap(), "--suite", "eigen_residual:ices", "--cutoff", "200"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn reproducible_runs_repeat_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"commutator\", \"entanglement\"]\nreproducible = true\nworkers = 2\n");
    let a = run(&["--config", cfg.to_str().unwrap()]);
    let b = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

fn json_leaf() -> impl Strategy<Value = Value> {
    prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        any::<i64>().prop_map(|i| json!(i)),
        any::<f64>().prop_filter("finite", |f| f.is_finite()).prop_map(|f| json!(f)),
        "[a-z \"\\\\é]{0,8}".prop_map(Value::String),
    ]
}

fn json_value() -> impl Strategy<Value = Value> {
    json_leaf().prop_recursive(3, 24, 5, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..5).prop_map(Value::Array),
            prop::collection::btree_map("[a-z_]{1,6}", inner, 0..5).prop_map(|m| Value::Object(m.into_iter().collect())),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_json_round_trips(v in json_value()) {
        let text = canonical_json(&v);
        prop_assert_eq!(reserialize(&text).unwrap(), text.clone());
        let back: Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn config_echo_round_trips(seed in any::<u64>(), cutoff in 1usize..64, workers in 1usize..8, strict in 1e-14f64..1e-4) {
        let mut cfg = RunConfig { seed, cutoff, workers, ..RunConfig::default() };
        cfg.tolerances.strict = strict;
        let echoed = serde_json::to_value(&cfg).unwrap();
        let text = canonical_json(&echoed);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(RunConfig::from_echo(&parsed).unwrap(), cfg);
    }
}

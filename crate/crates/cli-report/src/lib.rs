//! Runs the verification suites from a TOML config and writes canonical JSON
//! or CSV reports.

mod config;
mod error;
mod report;
mod run;
mod suites;

pub use config::{
    AbcdConfig, CliOverrides, CompletenessConfig, Format, LabelGrids, RunConfig, SuiteId, SuiteOverride, TierConfig, MAX_LABEL_QP,
    MAX_LABEL_Z, MAX_LAMBDA, MAX_Y,
};
pub use error::CliError;
pub use report::{canonical_json, emit_report, render, reserialize, SuiteReport, VerificationReport, TOOL_VERSION};
pub use run::{resource_guard, run_suite};
pub use suites::{estimated_bytes, run_one, STRICTLY_BELOW_ONE};

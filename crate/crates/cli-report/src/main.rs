use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cli_report::{emit_report, run_suite, CliError, CliOverrides, Format, RunConfig};

/// Runs verification suites and writes a residual report.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Suite to run; repeat to select several. Replaces the config list.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Default per-mode Fock cutoff.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Seed of every random draw.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat unknown config keys and out-of-range labels as usage errors.
    #[arg(long)]
    strict: bool,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io { path: args.config.clone(), source })?;
    let (mut cfg, unknown) = RunConfig::from_toml_str(&text)?;
    cfg.apply(&CliOverrides {
        suites: args.suites.clone(),
        cutoff: args.cutoff,
        seed: args.seed,
        format: args.format,
        out: args.out.clone(),
        strict: args.strict,
    });
    if !unknown.is_empty() {
        if cfg.strict {
            return Err(CliError::config(unknown.join(", "), "unknown key"));
        }
        eprintln!("warning: ignoring unknown config keys: {}", unknown.join(", "));
    }
    for w in cfg.validate()? {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = load(&args).and_then(|cfg| {
        let report = run_suite(&cfg)?;
        emit_report(&report, cfg.format, cfg.out.as_deref())?;
        Ok(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

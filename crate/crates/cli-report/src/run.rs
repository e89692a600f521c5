use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::report::{SuiteReport, VerificationReport, TOOL_VERSION};
use crate::suites::{estimated_bytes, run_one};
use crate::{CliError, RunConfig};

const BYTES_PER_MB: f64 = 1024.0 * 1024.0;

/// Rejects the run when any selected suite would exceed the memory ceiling.
pub fn resource_guard(cfg: &RunConfig) -> Result<(), CliError> {
    for id in cfg.selected_suites()? {
        let needed_mb = estimated_bytes(cfg, id) / BYTES_PER_MB;
        if needed_mb > cfg.memory_ceiling_mb {
            return Err(CliError::Resource { suite: id.to_string(), needed_mb, ceiling_mb: cfg.memory_ceiling_mb });
        }
    }
    Ok(())
}

/// Runs every selected suite on up to `workers` threads and assembles the
/// report in suite order. Failing residuals are recorded, never raised. In
/// reproducible mode the timings are written as zero so whole files repeat.
pub fn run_suite(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    let ids = cfg.selected_suites()?;
    resource_guard(cfg)?;
    let start = Instant::now();
    let slots: Vec<Mutex<Option<SuiteReport>>> = ids.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = cfg.workers.clamp(1, ids.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&id) = ids.get(i) else { break };
                let t = Instant::now();
                let records = run_one(cfg, id);
                let seconds = t.elapsed().as_secs_f64();
                *slots[i].lock().expect("slot lock") = Some(SuiteReport { id, records, seconds });
            });
        }
    });
    let mut suites: Vec<SuiteReport> =
        slots.into_iter().map(|s| s.into_inner().expect("slot lock").expect("every suite ran")).collect();
    let mut total_seconds = start.elapsed().as_secs_f64();
    if cfg.reproducible {
        total_seconds = 0.0;
        suites.iter_mut().for_each(|s| s.seconds = 0.0);
    }
    Ok(VerificationReport { version: TOOL_VERSION.into(), config: cfg.clone(), suites, total_seconds })
}

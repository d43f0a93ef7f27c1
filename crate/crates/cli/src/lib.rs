//! Batch front end for the ctqw-qaoa experiments: validated configuration,
//! experiment runners, and CSV plus JSON sidecar output.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use config::{validate, ExperimentKind, RawConfig, ResolvedConfig, OUT_DIR_ENV};
use experiments::run_experiment;
use output::{write_csv, write_sidecar, RunStatus, Sidecar};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Partial = 3,
}

/// Machine-readable record printed to stderr on any non-zero exit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub status: &'static str,
    pub exit_code: i32,
    pub errors: Vec<String>,
}

impl ErrorRecord {
    pub fn new(exit: Exit, errors: Vec<String>) -> Self {
        let status = match exit {
            Exit::Success => "ok",
            Exit::Failure => "error",
            Exit::Usage => "usage-error",
            Exit::Partial => "partial",
        };
        Self { status, exit_code: exit as i32, errors }
    }
}

/// Merges the config file under the flags, validates, runs and writes the
/// output files.
pub fn execute(experiment: ExperimentKind, flags: RawConfig, config_file: Option<&Path>) -> Result<Exit, ErrorRecord> {
    let raw = match config_file {
        Some(path) => RawConfig::from_toml_file(path)
            .map_err(|e| ErrorRecord::new(Exit::Usage, vec![e]))?
            .overridden_by(flags),
        None => flags,
    };
    let default_dir = std::env::var_os(OUT_DIR_ENV).map(std::path::PathBuf::from);
    let cfg = validate(experiment, &raw, default_dir.as_deref()).map_err(|e| ErrorRecord::new(Exit::Usage, e))?;
    run(&cfg)
}

pub fn run(cfg: &ResolvedConfig) -> Result<Exit, ErrorRecord> {
    let io_error = |e: std::io::Error| ErrorRecord::new(Exit::Failure, vec![e.to_string()]);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| ErrorRecord::new(Exit::Failure, vec![e.to_string()]))?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
    let clock = Instant::now();
    let table = pool.install(|| run_experiment(cfg));
    let duration = clock.elapsed().as_secs_f64();

    write_csv(&cfg.out, cfg, &table).map_err(io_error)?;
    let status = if table.failures.is_empty() { RunStatus::Ok } else { RunStatus::Partial };
    let sidecar = Sidecar {
        status,
        experiment: cfg.experiment.name(),
        version: output::ctqw_qaoa_version(),
        cli_version: env!("CARGO_PKG_VERSION"),
        csv: cfg.out.display().to_string(),
        columns: &table.columns,
        rows: table.rows.len(),
        config: cfg,
        started_unix_seconds: started,
        duration_seconds: duration,
        errors: &table.failures,
        skipped_orders: &table.skipped,
    };
    write_sidecar(&cfg.sidecar_path(), &sidecar).map_err(io_error)?;

    match status {
        RunStatus::Ok => Ok(Exit::Success),
        RunStatus::Partial => Err(ErrorRecord::new(
            Exit::Partial,
            table.failures.iter().map(|f| format!("{}: {}", f.cell, f.error)).collect(),
        )),
    }
}

//! CSV and JSON sidecar emission.
//!
//! The CSV depends only on the resolved configuration, so identical
//! configurations give byte-identical files. Timing lives in the sidecar.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::ResolvedConfig;
use crate::experiments::{CellFailure, Table, Value};

/// Shortest round-trip-safe rendering with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn render(value: &Value) -> String {
    match value {
        Value::Int(i) => i.to_string(),
        Value::Float(x) => format_float(*x),
        Value::Text(s) => s.clone(),
    }
}

pub fn metadata_line(cfg: &ResolvedConfig, table: &Table) -> String {
    let mut line = format!(
        "# ctqw-qaoa {} experiment={}",
        ctqw_qaoa_version(),
        cfg.experiment
    );
    for (k, v) in &table.metadata {
        line.push_str(&format!(" {k}={v}"));
    }
    line
}

/// Version of the simulation library that produced the numbers.
pub fn ctqw_qaoa_version() -> &'static str {
    ctqw_qaoa::VERSION
}

pub fn write_csv(path: &Path, cfg: &ResolvedConfig, table: &Table) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", metadata_line(cfg, table))?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(render))?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    Partial,
}

#[derive(Debug, Serialize)]
pub struct Sidecar<'a> {
    pub status: RunStatus,
    pub experiment: &'a str,
    pub version: &'static str,
    pub cli_version: &'static str,
    pub csv: String,
    pub columns: &'a [&'static str],
    pub rows: usize,
    pub config: &'a ResolvedConfig,
    pub started_unix_seconds: f64,
    pub duration_seconds: f64,
    pub errors: &'a [CellFailure],
    pub skipped_orders: &'a [CellFailure],
}

pub fn write_sidecar(path: &Path, sidecar: &Sidecar<'_>) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, sidecar)?;
    writeln!(out)?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.5, 1608.49543863879] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }
}

//! Result files: CSV with a fixed header, or a JSON envelope that also
//! echoes the scenario. Neither contains timestamps or timings, so equal
//! inputs give byte-identical files; those go to a `.meta.json` sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::Scenario;
use crate::error::CliError;
use crate::runner::ResultRow;

pub const CSV_HEADER: [&str; 12] = [
    "series",
    "parameter",
    "value",
    "unit",
    "source",
    "power_cov",
    "channel_cov",
    "total_cov",
    "power_ci",
    "channel_ci",
    "total_ci",
    "trials",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.series.clone(),
            r.parameter.clone(),
            opt(r.value),
            r.unit.clone(),
            r.source.as_str().to_string(),
            r.power_cov.to_string(),
            r.channel_cov.to_string(),
            r.total_cov.to_string(),
            opt(r.power_ci),
            opt(r.channel_ci),
            opt(r.total_ci),
            opt(r.trials),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    scenario: &'a Scenario,
    rows: &'a [ResultRow],
}

pub fn write_json<W: Write>(sc: &Scenario, rows: &[ResultRow], mut out: W) -> Result<(), CliError> {
    let env = Envelope {
        tool: "pbcov",
        version: env!("CARGO_PKG_VERSION"),
        scenario: sc,
        rows,
    };
    serde_json::to_writer_pretty(&mut out, &env).map_err(io_err)?;
    writeln!(out).map_err(io_err)
}

pub fn write_rows<W: Write>(
    sc: &Scenario,
    rows: &[ResultRow],
    format: Format,
    out: W,
) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(sc, rows, out),
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct RowTiming<'a> {
    series: &'a str,
    value: Option<f64>,
    source: &'a str,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct Meta<'a> {
    version: &'static str,
    command: Vec<String>,
    started_unix_s: f64,
    finished_unix_s: f64,
    wall_time_s: f64,
    rows: Vec<RowTiming<'a>>,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Timestamps and per-row timings for a run whose data went to `out`.
pub fn write_sidecar(out: &Path, started: f64, rows: &[ResultRow]) -> Result<(), CliError> {
    let finished = unix_now();
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        command: std::env::args().collect(),
        started_unix_s: started,
        finished_unix_s: finished,
        wall_time_s: finished - started,
        rows: rows
            .iter()
            .map(|r| RowTiming {
                series: &r.series,
                value: r.value.filter(|v| v.is_finite()),
                source: r.source.as_str(),
                wall_time_s: r.wall_time_s,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&meta).map_err(io_err)?;
    std::fs::write(sidecar_path(out), text + "\n").map_err(io_err)
}

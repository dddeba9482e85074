//! Serialization of run outputs: the snapshot CSV (bit-stable schema) and
//! the line-delimited event log.

use std::io::Write;
use std::path::{Path, PathBuf};

use pscrd_core::{EventLog, MetricsSnapshot};
use thiserror::Error;

/// Exact CSV header emitted for snapshot series.
pub const CSV_HEADER: &str = "hour,round_id,gini_raw,gini_decayed,nakamoto_raw,\
nakamoto_decayed,active_bridges,majority_size,attacker_points_raw,\
attacker_points_decayed,attacker_reward_share";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot serialize an empty snapshot series")]
    EmptySeries,
}

/// Renders a snapshot series as CSV: the fixed header, one row per
/// snapshot, reals with six decimal places, LF line endings.
pub fn csv_string(snapshots: &[MetricsSnapshot]) -> Result<String, ReportError> {
    if snapshots.is_empty() {
        return Err(ReportError::EmptySeries);
    }
    let mut out = String::with_capacity(snapshots.len() * 96 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in snapshots {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{},{},{},{},{:.6},{:.6},{:.6}\n",
            s.hour,
            s.round_id,
            s.gini_raw,
            s.gini_decayed,
            s.nakamoto_raw,
            s.nakamoto_decayed,
            s.active_bridges,
            s.majority_size,
            s.attacker_points_raw,
            s.attacker_points_decayed,
            s.attacker_reward_share,
        ));
    }
    Ok(out)
}

/// Writes the snapshot CSV to a file (UTF-8, LF endings).
pub fn emit_csv(snapshots: &[MetricsSnapshot], path: &Path) -> Result<(), ReportError> {
    let body = csv_string(snapshots)?;
    write_bytes(path, body.as_bytes())
}

/// Writes the event log as line-delimited JSON records, one event per line.
pub fn emit_events(log: &EventLog, path: &Path) -> Result<(), ReportError> {
    let mut out = Vec::new();
    for event in log.iter() {
        serde_json::to_writer(&mut out, event).expect("events serialize infallibly");
        out.push(b'\n');
    }
    write_bytes(path, &out)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    let mut file = std::fs::File::create(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(bytes).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

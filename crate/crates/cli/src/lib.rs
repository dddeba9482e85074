//! Command-line front end for the PSCRD simulator: scenario config files,
//! CSV and event-log serialization, SVG chart emission, run manifests, and
//! the acceptance gate behind `pscrd verify`.

pub mod acceptance;
pub mod chart;
pub mod config;
pub mod manifest;
pub mod report;
pub mod runner;

pub use config::{parse_config, parse_config_str, ConfigError};
pub use manifest::{config_hash, RunManifest};
pub use report::{csv_string, emit_csv, emit_events, ReportError, CSV_HEADER};

//! Scenario config files: TOML with one table per nested section, unknown
//! keys rejected, defaults applied for absent optional keys. See the README
//! for the full schema.

use std::path::{Path, PathBuf};

use pscrd_core::ScenarioConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config {path}: {message}")]
    Validation { path: PathBuf, message: String },
}

/// Reads, parses, and validates a scenario config file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text, path)
}

/// Parses config text; `path` is used only for error context.
pub fn parse_config_str(text: &str, path: &Path) -> Result<ScenarioConfig, ConfigError> {
    if text.trim().is_empty() {
        return Err(ConfigError::Parse {
            path: path.to_path_buf(),
            message: "file is empty".into(),
        });
    }
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        // toml errors carry line/column context in their message.
        message: e.to_string(),
    })?;
    cfg.validate().map_err(|e| ConfigError::Validation {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(cfg)
}

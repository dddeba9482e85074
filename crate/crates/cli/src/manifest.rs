//! Run manifests: a platform-stable digest of the scenario config plus the
//! run's seed, timestamps, and tool version.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use pscrd_core::ScenarioConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::ReportError;

/// Metadata written alongside every run's outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Digest of the canonicalized config, stable across platforms.
    pub config_hash: String,
    pub seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(cfg: &ScenarioConfig, started_unix: u64, finished_unix: u64) -> Self {
        Self {
            config_hash: config_hash(cfg),
            seed: cfg.seed,
            started_unix,
            finished_unix,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), ReportError> {
        let json =
            serde_json::to_string_pretty(self).expect("manifest serializes infallibly");
        std::fs::write(path, json).map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Current wall-clock time as Unix seconds.
pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// SHA-256 over the canonical JSON form of the resolved config.
///
/// The seed is zeroed before hashing: the output layout keys runs by
/// `<config-hash>/<seed>`, so two replicates of one experiment share a
/// hash while any change to an experiment-defining field produces a new
/// one. Canonical JSON here means the resolved struct serialized in
/// declaration order with shortest-round-trip floats, which is identical
/// on every platform.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let mut canonical = cfg.clone();
    canonical.seed = 0;
    let json = serde_json::to_string(&canonical).expect("config serializes infallibly");
    let digest = Sha256::digest(json.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_for_identical_configs() {
        let a = ScenarioConfig::baseline();
        let b = ScenarioConfig::baseline();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn hash_changes_with_experiment_fields() {
        let base = ScenarioConfig::baseline();
        let mut lambda = base.clone();
        lambda.lambda = 0.01;
        assert_ne!(config_hash(&base), config_hash(&lambda));

        let mut fee = base.clone();
        fee.fee = 2.0;
        assert_ne!(config_hash(&base), config_hash(&fee));

        let mut groups = base.clone();
        groups.groups[0].size = 21;
        assert_ne!(config_hash(&base), config_hash(&groups));
    }

    #[test]
    fn hash_ignores_the_seed() {
        let base = ScenarioConfig::baseline();
        let mut reseeded = base.clone();
        reseeded.seed = 777;
        assert_eq!(config_hash(&base), config_hash(&reseeded));
    }

    #[test]
    fn manifest_records_seed_and_version() {
        let cfg = ScenarioConfig::baseline();
        let m = RunManifest::new(&cfg, 100, 200);
        assert_eq!(m.seed, 42);
        assert_eq!(m.config_hash, config_hash(&cfg));
        assert_eq!(m.tool_version, env!("CARGO_PKG_VERSION"));
    }
}
